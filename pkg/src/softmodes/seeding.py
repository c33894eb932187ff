"""Initial center selection: uniform rows or distance-weighted sampling."""

from __future__ import annotations

import numpy as np

RANDOM = "random"
DSAMPLE = "dsample"
METHODS = (RANDOM, DSAMPLE)


def check_seeding(method: str) -> str:
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown seeding method {method!r}; expected one of {METHODS}")
    return method


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k} with n={n} points")


def seed_uniform(values: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Copy k distinct rows chosen uniformly without replacement."""
    values = np.asarray(values)
    _check_k(values.shape[0], k)
    idx = rng.choice(values.shape[0], size=k, replace=False)
    return values[idx].copy()

def seed_distance(values: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Sequential distance sampling over the Hamming metric.

    The first center is a uniform row; each further center is drawn with
    probability proportional to the Hamming distance to its nearest chosen
    center, so already-chosen rows (distance zero) are never redrawn. If
    every remaining distance is zero the draw falls back to a uniform choice
    among unchosen indices.
    """
    values = np.asarray(values)
    n = values.shape[0]
    _check_k(n, k)
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = int(rng.integers(n))
    nearest = (values != values[chosen[0]]).sum(axis=1)
    for i in range(1, k):
        total = int(nearest.sum())
        if total == 0:
            mask = np.ones(n, dtype=bool)
            mask[chosen[:i]] = False
            candidates = np.flatnonzero(mask)
            idx = int(candidates[rng.integers(len(candidates))])
        else:
            cum = np.cumsum(nearest)
            u = rng.random() * total
            idx = int(np.searchsorted(cum, u, side="right"))
        chosen[i] = idx
        np.minimum(nearest, (values != values[idx]).sum(axis=1), out=nearest)
    return values[chosen].copy()


def seed_centers(values: np.ndarray, k: int, method: str, rng: np.random.Generator) -> np.ndarray:
    """Dispatch on the seeding method name."""
    method = check_seeding(method)
    if method == RANDOM:
        return seed_uniform(values, k, rng)
    return seed_distance(values, k, rng)
