"""Scoring of predicted clusterings against ground-truth labels.

Accuracy is defined as the best fraction of agreeing points over injective
mappings of predicted clusters to true labels, i.e. a maximum-weight
matching on the confusion matrix. Two matchers are provided and must agree:
an exhaustive permutation search (used for small k and as an oracle) and the
Hungarian method.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

# Exhaustive search caps at 6! = 720 permutations; above this accuracy()
# switches to the Hungarian matcher.
EXHAUSTIVE_MAX_K = 6


def _check_pair(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape[0]} predictions vs {truth.shape[0]} labels")
    if pred.size == 0:
        raise ValueError("cannot score an empty assignment")
    if pred.min() < 0 or truth.min() < 0:
        raise ValueError("cluster ids and labels must be non-negative")
    return pred, truth


def confusion_matrix(pred, truth) -> np.ndarray:
    """Count matrix M[a, b] = |{i : pred_i = a, truth_i = b}|."""
    pred, truth = _check_pair(pred, truth)
    k_pred = int(pred.max()) + 1
    k_true = int(truth.max()) + 1
    m = np.zeros((k_pred, k_true), dtype=np.int64)
    np.add.at(m, (pred, truth), 1)
    return m


def _pad_square(m: np.ndarray) -> np.ndarray:
    k = max(m.shape)
    out = np.zeros((k, k), dtype=np.int64)
    out[: m.shape[0], : m.shape[1]] = m
    return out


def matched_count_exhaustive(m: np.ndarray) -> int:
    """Maximum matching weight by trying every permutation of a square matrix."""
    m = _pad_square(np.asarray(m))
    k = m.shape[0]
    if k > EXHAUSTIVE_MAX_K:
        raise ValueError(f"exhaustive matching is capped at k={EXHAUSTIVE_MAX_K}, got {k}")
    rows = np.arange(k)
    return max(int(m[rows, list(perm)].sum()) for perm in permutations(range(k)))


def matched_count_hungarian(m: np.ndarray) -> int:
    """Maximum matching weight via linear sum assignment."""
    m = _pad_square(np.asarray(m))
    rows, cols = linear_sum_assignment(m, maximize=True)
    return int(m[rows, cols].sum())


def accuracy(pred, truth) -> float:
    """Best-matching agreement fraction in [0, 1].

    Invariant to relabeling of either side. Non-square confusion matrices
    are zero-padded, so unmatched clusters contribute nothing.
    """
    pred, truth = _check_pair(pred, truth)
    m = confusion_matrix(pred, truth)
    if max(m.shape) <= EXHAUSTIVE_MAX_K:
        best = matched_count_exhaustive(m)
    else:
        best = matched_count_hungarian(m)
    return best / pred.size
