"""Core clustering loops: the rounded-center iteration and a Lloyd baseline.

Both algorithms alternate nearest-center assignment with a center update
until the partition repeats or an iteration cap is hit. The rounded-center
iteration works in the Hamming metric and resamples each center coordinate
from a rounded per-attribute frequency vector; with plurality rounding this
is exactly the classical k-modes update. The Lloyd baseline runs standard
k-means on the one-hot expansion.

All randomness is drawn from counter-based streams derived from the config
seed (one stream per purpose per iteration), so results are bit-identical
for every thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import _streams
from .dataset import AttributeDomain, CategoricalDataset, OneHotMatrix, as_dataset
from .evaluation import accuracy
from .rounding import RoundingSpec, _round_weights, sample_index
from .seeding import check_seeding, seed_centers


@dataclass(frozen=True)
class ClusteringConfig:
    """Run parameters shared by both clustering loops."""

    k: int
    rounding: RoundingSpec = RoundingSpec.soft(3.0)
    seeding: str = "dsample"
    max_iter: int = 100
    seed: int = 0
    n_threads: Union[int, str] = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        check_seeding(self.seeding)
        self.resolve_threads()

    def resolve_threads(self) -> int:
        if self.n_threads == "auto":
            return max(1, os.cpu_count() or 1)
        t = int(self.n_threads)
        if t < 1:
            raise ValueError(f"n_threads must be >= 1 or 'auto', got {self.n_threads!r}")
        return t


@dataclass(frozen=True)
class IterationStats:
    """Objective after one assignment step; accuracy only when labels exist."""

    objective: float
    accuracy: Optional[float] = None


@dataclass(eq=False)
class ClusteringResult:
    assignment: np.ndarray
    centers: np.ndarray
    iterations: int
    converged: bool
    trace: list[IterationStats] = field(default_factory=list)


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of coordinates on which two code vectors differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return int((a != b).sum())


def _chunk_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n)) if n else 1
    step = -(-n // parts)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)] or [(0, 0)]


def _run_chunked(fn, bounds, n_threads: int):
    if n_threads <= 1 or len(bounds) <= 1:
        for b in bounds:
            fn(b)
        return
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        list(pool.map(fn, bounds))


class _HammingKernel:
    """Point-to-center Hamming distances, chunked over rows.

    Binary data takes a matmul path: |x - c|_H = |x| + |c| - 2 x.c with all
    quantities exact small integers in float32, so the result is identical
    for any summation order and any chunking.
    """

    def __init__(self, values: np.ndarray, n_threads: int = 1):
        self.values = values
        self.n_threads = n_threads
        self.binary = values.size > 0 and int(values.max(initial=0)) <= 1
        if self.binary:
            self._xf = values.astype(np.float32)
            self._wx = self._xf.sum(axis=1)

    def distances(self, centers: np.ndarray) -> np.ndarray:
        n = self.values.shape[0]
        k = centers.shape[0]
        out = np.empty((n, k), dtype=np.int64)
        bounds = _chunk_bounds(n, self.n_threads)
        if self.binary:
            cf = centers.astype(np.float32)
            wc = cf.sum(axis=1)

            def work(b):
                lo, hi = b
                cross = self._xf[lo:hi] @ cf.T
                out[lo:hi] = (self._wx[lo:hi, None] + wc[None, :] - 2.0 * cross).astype(np.int64)

        else:

            def work(b):
                lo, hi = b
                block = self.values[lo:hi]
                for m in range(k):
                    out[lo:hi, m] = (block != centers[m]).sum(axis=1)

        _run_chunked(work, bounds, self.n_threads)
        return out


def pairwise_hamming(values: np.ndarray, centers: np.ndarray, n_threads: int = 1) -> np.ndarray:
    """(n, k) matrix of Hamming distances from each row to each center."""
    values = np.asarray(values)
    centers = np.asarray(centers)
    if values.ndim != 2 or centers.ndim != 2 or values.shape[1] != centers.shape[1]:
        raise ValueError(
            f"shape mismatch: points {values.shape} vs centers {centers.shape}"
        )
    return _HammingKernel(values, n_threads).distances(centers)


def _argmin_random_ties(dist: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise argmin; among tied minima pick index floor(u * #ties)."""
    mins = dist.min(axis=1, keepdims=True)
    ties = dist == mins
    counts = ties.sum(axis=1)
    pick = np.minimum((u * counts).astype(np.int64), counts - 1)
    return np.argmax(ties.cumsum(axis=1) > pick[:, None], axis=1).astype(np.int32)


def assign(
    ds: Union[CategoricalDataset, np.ndarray],
    centers: np.ndarray,
    rng: np.random.Generator,
    n_threads: int = 1,
) -> np.ndarray:
    """Assign each point to a nearest center, breaking ties uniformly.

    One uniform is consumed per point whether or not that point ties, so
    stream consumption never depends on the data.
    """
    values = ds.values if isinstance(ds, CategoricalDataset) else np.asarray(ds)
    centers = np.asarray(centers)
    if centers.ndim != 2 or centers.shape[0] < 1:
        raise ValueError("centers must be a non-empty (k, d) matrix")
    dist = pairwise_hamming(values, centers, n_threads)
    return _argmin_random_ties(dist, rng.random(values.shape[0]))


def _as_arities(domains) -> np.ndarray:
    if len(domains) and isinstance(domains[0], AttributeDomain):
        return np.array([dom.arity for dom in domains], dtype=np.int64)
    return np.asarray(domains, dtype=np.int64)


def _grouped_value_counts(values, assignment, cols, arity, k):
    """Counts of each value per (cluster, column) for same-arity columns."""
    m = len(cols)
    sub = values if m == values.shape[1] else values[:, cols]
    comp = (
        assignment.astype(np.int64)[:, None] * (m * arity)
        + np.arange(m, dtype=np.int64)[None, :] * arity
        + sub
    )
    return np.bincount(comp.ravel(), minlength=k * m * arity).reshape(k, m, arity)


def update_centers(
    values: np.ndarray,
    assignment: np.ndarray,
    arities: np.ndarray,
    rounding: RoundingSpec,
    u: np.ndarray,
    k: int,
) -> np.ndarray:
    """Resample every center coordinate from rounded cluster frequencies.

    u has shape (k, d): one uniform per (cluster, attribute), consumed by
    attribute index so the result does not depend on processing order. Rows
    for empty clusters come out as placeholders; the caller reseeds them.
    """
    n, d = values.shape
    sizes = np.bincount(assignment, minlength=k)
    denom = np.maximum(sizes, 1)[:, None, None]
    centers = np.empty((k, d), dtype=np.int32)
    for arity in np.unique(arities):
        arity = int(arity)
        cols = np.flatnonzero(arities == arity)
        counts = _grouped_value_counts(values, assignment, cols, arity, k)
        freq = counts / denom
        freq[sizes == 0] = 1.0 / arity
        weights = _round_weights(freq, rounding)
        centers[:, cols] = sample_index(weights, u[:, cols])
    return centers


def update_center(
    cluster_rows: np.ndarray,
    domains,
    rounding: RoundingSpec,
    rng: np.random.Generator,
) -> np.ndarray:
    """Compute one center from the rows assigned to a cluster."""
    rows = np.asarray(cluster_rows)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValueError("cluster must contain at least one row")
    u = rng.random((1, rows.shape[1]))
    zeros = np.zeros(rows.shape[0], dtype=np.int32)
    return update_centers(rows, zeros, _as_arities(domains), rounding, u, k=1)[0]


def objective(
    ds: Union[CategoricalDataset, np.ndarray],
    centers: np.ndarray,
    assignment: np.ndarray,
) -> int:
    """Sum of Hamming distances from each point to its assigned center."""
    values = ds.values if isinstance(ds, CategoricalDataset) else np.asarray(ds)
    centers = np.asarray(centers)
    assignment = np.asarray(assignment)
    if assignment.shape != (values.shape[0],):
        raise ValueError("assignment length must match the point count")
    if centers.shape[1] != values.shape[1]:
        raise ValueError("center dimension must match the point dimension")
    return int((values != centers[assignment]).sum())


def _reseed_empty(centers, sizes, values, u_reseed):
    """Replace centers of empty clusters with uniformly random data rows."""
    n = values.shape[0]
    for i in np.flatnonzero(sizes == 0):
        row = min(int(u_reseed[i] * n), n - 1)
        centers[i] = values[row]
    return centers


def run_softmodes(
    ds: Union[CategoricalDataset, np.ndarray],
    config: ClusteringConfig,
) -> ClusteringResult:
    """Run the rounded-center iteration until the partition repeats.

    Per iteration: assign all points to nearest centers (random ties), then
    resample each center from its cluster's rounded attribute frequencies.
    The trace records, per assignment step, the Hamming objective against
    the centers used for that step, and accuracy when the dataset carries
    ground-truth labels. The reported assignment is the last one computed;
    the reported centers are the most recently updated ones.
    """
    ds = as_dataset(ds)
    n, d = ds.n, ds.d
    if config.k > n:
        raise ValueError(f"k={config.k} exceeds the number of points n={n}")
    n_threads = config.resolve_threads()
    arities = ds.arities
    values = ds.values

    centers = seed_centers(
        values, config.k, config.seeding, _streams.derive_rng(config.seed, _streams.SEEDING)
    )
    kernel = _HammingKernel(values, n_threads)

    trace: list[IterationStats] = []
    assignment: Optional[np.ndarray] = None
    converged = False
    iterations = 0
    for r in range(1, config.max_iter + 1):
        iterations = r
        dist = kernel.distances(centers)
        u_assign = _streams.derive_rng(config.seed, _streams.ASSIGN, r).random(n)
        current = _argmin_random_ties(dist, u_assign)
        obj = int(np.take_along_axis(dist, current[:, None].astype(np.int64), axis=1).sum())
        acc = accuracy(current, ds.labels) if ds.labels is not None else None
        trace.append(IterationStats(objective=obj, accuracy=acc))
        if assignment is not None and np.array_equal(current, assignment):
            assignment = current
            converged = True
            break
        assignment = current
        u_update = _streams.derive_rng(config.seed, _streams.UPDATE, r).random((config.k, d))
        centers = update_centers(values, assignment, arities, config.rounding, u_update, config.k)
        sizes = np.bincount(assignment, minlength=config.k)
        u_reseed = _streams.derive_rng(config.seed, _streams.RESEED, r).random(config.k)
        _reseed_empty(centers, sizes, values, u_reseed)

    return ClusteringResult(
        assignment=assignment,
        centers=centers,
        iterations=iterations,
        converged=converged,
        trace=trace,
    )


def _decode_centroids(centroids: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Per-attribute argmax of a block centroid matrix, lowest index on ties."""
    k = centroids.shape[0]
    d = len(offsets) - 1
    codes = np.empty((k, d), dtype=np.int32)
    for j in range(d):
        codes[:, j] = centroids[:, offsets[j] : offsets[j + 1]].argmax(axis=1)
    return codes


def run_lloyd(
    onehot: OneHotMatrix,
    config: ClusteringConfig,
    labels: Optional[np.ndarray] = None,
) -> ClusteringResult:
    """Classical k-means on a one-hot expansion.

    Assignment uses squared Euclidean distance with ties to the lowest
    center index; centroids are means of assigned rows; empty clusters are
    reseeded from a uniformly random row. The trace objective is the
    squared-Euclidean inertia of each assignment step. Reported centers are
    the per-attribute argmax decoding of the final centroids.

    Distances are computed from the block structure rather than the dense
    matrix: ||x - c||^2 = d - 2 * sum_j c[block j, code x_j] + ||c||^2.
    """
    codes = onehot.codes
    offsets = onehot.offsets
    n, d = codes.shape
    width = onehot.width
    if config.k > n:
        raise ValueError(f"k={config.k} exceeds the number of points n={n}")
    n_threads = config.resolve_threads()

    col_idx = (offsets[:-1][None, :] + codes).astype(np.int64)

    def point_centroid(row: int) -> np.ndarray:
        c = np.zeros(width, dtype=np.float64)
        c[col_idx[row]] = 1.0
        return c

    seed_rows = seed_centers(
        codes, config.k, config.seeding, _streams.derive_rng(config.seed, _streams.SEEDING)
    )
    centroids = np.zeros((config.k, width), dtype=np.float64)
    seed_cols = offsets[:-1][None, :] + seed_rows
    centroids[np.arange(config.k)[:, None], seed_cols] = 1.0

    def distances(cents: np.ndarray) -> np.ndarray:
        out = np.empty((n, config.k), dtype=np.float64)
        bounds = _chunk_bounds(n, n_threads)

        def work(b):
            lo, hi = b
            block = col_idx[lo:hi]
            for m in range(config.k):
                out[lo:hi, m] = cents[m][block].sum(axis=1)

        _run_chunked(work, bounds, n_threads)
        norms = (cents**2).sum(axis=1)
        return d - 2.0 * out + norms[None, :]

    trace: list[IterationStats] = []
    assignment: Optional[np.ndarray] = None
    converged = False
    iterations = 0
    for r in range(1, config.max_iter + 1):
        iterations = r
        dist = distances(centroids)
        current = dist.argmin(axis=1).astype(np.int32)
        inertia = float(np.take_along_axis(dist, current[:, None].astype(np.int64), axis=1).sum())
        acc = accuracy(current, labels) if labels is not None else None
        trace.append(IterationStats(objective=inertia, accuracy=acc))
        if assignment is not None and np.array_equal(current, assignment):
            assignment = current
            converged = True
            break
        assignment = current
        sizes = np.bincount(assignment, minlength=config.k)
        denom = np.maximum(sizes, 1)[:, None, None]
        arities = np.diff(offsets)
        for arity in np.unique(arities):
            arity = int(arity)
            cols = np.flatnonzero(arities == arity)
            counts = _grouped_value_counts(codes, assignment, cols, arity, config.k)
            flat = (offsets[cols][:, None] + np.arange(arity)[None, :]).ravel()
            centroids[:, flat] = (counts / denom).reshape(config.k, -1)
        u_reseed = _streams.derive_rng(config.seed, _streams.RESEED, r).random(config.k)
        for i in np.flatnonzero(sizes == 0):
            centroids[i] = point_centroid(min(int(u_reseed[i] * n), n - 1))

    return ClusteringResult(
        assignment=assignment,
        centers=_decode_centroids(centroids, offsets),
        iterations=iterations,
        converged=converged,
        trace=trace,
    )
