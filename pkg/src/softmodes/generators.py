"""Synthetic labeled benchmark datasets over {0,1}^d.

Two generative models are provided. The block model partitions points into
clusters and features into blocks and sets each bit independently with a
per-(cluster, block) probability. The corrupted-codewords model draws k
uniform random binary centers and produces each clean point by flipping
every coordinate of its center independently with a fixed probability; an
optional noise fraction of points is drawn uniformly with uniform labels.

Generation and shuffling use counter-based streams derived from the spec
seed, so the same spec always yields the identical dataset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _streams
from .dataset import AttributeDomain, CategoricalDataset


def near_equal_split(total: int, parts: int) -> tuple[int, ...]:
    """Sizes that sum to total with the first (total mod parts) one larger."""
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    base, extra = divmod(total, parts)
    return tuple(base + 1 if i < extra else base for i in range(parts))


@dataclass(frozen=True)
class BbmSpec:
    """Block model parameters.

    cluster_sizes and feature_block_sizes must sum to n and d; probs is the
    k x k matrix of bit probabilities, entry (i, j) applying to points of
    cluster i on features of block j.
    """

    n: int
    d: int
    cluster_sizes: tuple[int, ...]
    feature_block_sizes: tuple[int, ...]
    probs: tuple[tuple[float, ...], ...]
    seed: int = 0

    def __post_init__(self) -> None:
        if sum(self.cluster_sizes) != self.n:
            raise ValueError(f"cluster sizes sum to {sum(self.cluster_sizes)}, expected n={self.n}")
        if sum(self.feature_block_sizes) != self.d:
            raise ValueError(
                f"feature block sizes sum to {sum(self.feature_block_sizes)}, expected d={self.d}"
            )
        if min(self.cluster_sizes, default=1) < 1 or min(self.feature_block_sizes, default=1) < 1:
            raise ValueError("block sizes must be positive")
        p = np.asarray(self.probs, dtype=np.float64)
        k = len(self.cluster_sizes)
        if p.shape != (k, len(self.feature_block_sizes)):
            raise ValueError(f"probability matrix must be {k} x {len(self.feature_block_sizes)}, got {p.shape}")
        if (p < 0).any() or (p > 1).any():
            raise ValueError("probabilities must lie in [0, 1]")

    @property
    def k(self) -> int:
        return len(self.cluster_sizes)

    @classmethod
    def from_pq(cls, n: int, d: int, k: int, p: float, q: float, seed: int = 0) -> "BbmSpec":
        """Near-equal blocks with p on the diagonal and q off it."""
        probs = tuple(
            tuple(p if i == j else q for j in range(k)) for i in range(k)
        )
        return cls(
            n=n,
            d=d,
            cluster_sizes=near_equal_split(n, k),
            feature_block_sizes=near_equal_split(d, k),
            probs=probs,
            seed=seed,
        )


@dataclass(frozen=True)
class CcmSpec:
    """Corrupted-codewords parameters: flip probability epsilon, noise fraction rho."""

    n: int
    d: int
    k: int
    epsilon: float
    rho: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1 or self.k < 1:
            raise ValueError("n, d, and k must be positive")
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in [0, 0.5), got {self.epsilon}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")

    @property
    def n_clean(self) -> int:
        # floor((1 - rho) * n), guarded so exact-integer products do not
        # truncate one short through float representation (e.g. 0.1 * 10000)
        return int(math.floor((1.0 - self.rho) * self.n + 1e-9))

    @property
    def n_noise(self) -> int:
        return self.n - self.n_clean


def _binary_dataset(values: np.ndarray, labels: np.ndarray) -> CategoricalDataset:
    d = values.shape[1]
    return CategoricalDataset(
        values=values.astype(np.int32),
        domains=tuple(AttributeDomain(2) for _ in range(d)),
        labels=labels.astype(np.int32),
        column_names=tuple(f"a{j}" for j in range(d)),
        label_column_name="label",
    )


def generate_bbm(spec: BbmSpec) -> CategoricalDataset:
    """Sample a labeled block-model dataset; rows come out shuffled."""
    probs = np.asarray(spec.probs, dtype=np.float64)
    row_probs = np.repeat(probs, spec.cluster_sizes, axis=0)
    cell_probs = np.repeat(row_probs, spec.feature_block_sizes, axis=1)
    u = _streams.derive_rng(spec.seed, _streams.GENERATE).random((spec.n, spec.d))
    values = (u < cell_probs).astype(np.int32)
    labels = np.repeat(np.arange(spec.k, dtype=np.int32), spec.cluster_sizes)
    perm = _streams.derive_rng(spec.seed, _streams.SHUFFLE).permutation(spec.n)
    return _binary_dataset(values[perm], labels[perm])


def ccm_centers(spec: CcmSpec) -> np.ndarray:
    """The k planted centers a spec will generate (same stream as the data)."""
    g = _streams.derive_rng(spec.seed, _streams.GENERATE)
    return (g.random((spec.k, spec.d)) < 0.5).astype(np.int32)


def generate_ccm(spec: CcmSpec) -> CategoricalDataset:
    """Sample a labeled corrupted-codewords dataset; rows come out shuffled.

    Clean points are split as evenly as possible across the k centers; the
    remaining floor-complement of rows is uniform noise labeled uniformly
    at random.
    """
    g = _streams.derive_rng(spec.seed, _streams.GENERATE)
    centers = (g.random((spec.k, spec.d)) < 0.5).astype(np.int32)
    clean_sizes = near_equal_split(spec.n_clean, spec.k)
    clean_labels = np.repeat(np.arange(spec.k, dtype=np.int32), clean_sizes)
    flips = g.random((spec.n_clean, spec.d)) < spec.epsilon
    clean = np.where(flips, 1 - centers[clean_labels], centers[clean_labels])
    noise = (g.random((spec.n_noise, spec.d)) < 0.5).astype(np.int32)
    noise_labels = g.integers(0, spec.k, size=spec.n_noise, dtype=np.int32)
    values = np.concatenate([clean.astype(np.int32), noise], axis=0)
    labels = np.concatenate([clean_labels, noise_labels])
    perm = _streams.derive_rng(spec.seed, _streams.SHUFFLE).permutation(spec.n)
    return _binary_dataset(values[perm], labels[perm])


def max_noise_accuracy(rho: float, k: int) -> float:
    """Accuracy ceiling under a rho fraction of uniformly labeled noise."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return rho / k + 1.0 - rho
