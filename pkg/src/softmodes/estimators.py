"""Scikit-learn style estimator wrappers around the clustering engine.

These classes exist so the algorithms compose with the wider ecosystem
(get_params/set_params, clone, fit_predict); the functional entry points in
`engine` remain the primitive interface.
"""

from __future__ import annotations

from typing import Union

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.exceptions import NotFittedError

from .dataset import CategoricalDataset, OneHotMatrix, as_dataset, one_hot
from .engine import ClusteringConfig, pairwise_hamming, run_lloyd, run_softmodes
from .rounding import RoundingSpec


def _check_fitted(est, attr="cluster_centers_"):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} must be fitted before calling predict")


class SoftModes(ClusterMixin, BaseEstimator):
    """Categorical clustering with soft-rounded center updates.

    Points are assigned to nearest centers in the Hamming metric; each
    center coordinate is then resampled from the cluster's per-attribute
    frequency vector after applying the selected rounding map. With
    rounding="plurality" this is the k-modes algorithm; "soft" with
    exponent t interpolates between sampling the empirical distribution
    (t=1) and the plurality rule (large t).

    Parameters
    ----------
    n_clusters : number of clusters.
    rounding : "plurality", "uniform", or "soft".
    t : soft-rounding exponent, finite and >= 1; ignored unless soft.
    seeding : "random" (uniform rows) or "dsample" (distance sampling).
    max_iter : iteration cap; the loop also stops when the partition repeats.
    random_state : root seed; every random draw is derived from it.
    n_threads : worker count for the assignment kernel, or "auto". Results
        are bit-identical for every setting.

    Attributes (after fit)
    ----------------------
    labels_, cluster_centers_, n_iter_, converged_, result_ (full trace).
    """

    def __init__(
        self,
        n_clusters: int = 8,
        rounding: str = "soft",
        t: float = 3.0,
        seeding: str = "dsample",
        max_iter: int = 100,
        random_state: int = 0,
        n_threads: Union[int, str] = 1,
    ):
        self.n_clusters = n_clusters
        self.rounding = rounding
        self.t = t
        self.seeding = seeding
        self.max_iter = max_iter
        self.random_state = random_state
        self.n_threads = n_threads

    def _config(self) -> ClusteringConfig:
        return ClusteringConfig(
            k=self.n_clusters,
            rounding=RoundingSpec.parse(self.rounding, self.t),
            seeding=self.seeding,
            max_iter=self.max_iter,
            seed=self.random_state,
            n_threads=self.n_threads,
        )

    def fit(self, X, y=None):
        """Cluster X (a code matrix or CategoricalDataset).

        If y is given (or X carries labels) a per-iteration accuracy trace
        is recorded; the labels never influence the clustering itself.
        """
        ds = as_dataset(X, labels=y)
        result = run_softmodes(ds, self._config())
        self.result_ = result
        self.labels_ = result.assignment
        self.cluster_centers_ = result.centers
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def predict(self, X) -> np.ndarray:
        """Nearest fitted center for each row, ties to the lowest index."""
        _check_fitted(self)
        ds = as_dataset(X)
        dist = pairwise_hamming(ds.values, self.cluster_centers_)
        return dist.argmin(axis=1).astype(np.int32)


class OneHotKMeans(ClusterMixin, BaseEstimator):
    """Lloyd's k-means on the one-hot expansion of categorical data.

    The Euclidean baseline: real-valued centroids, squared-distance
    assignment with ties to the lowest center index, empty clusters
    reseeded from a random row.
    """

    def __init__(
        self,
        n_clusters: int = 8,
        seeding: str = "dsample",
        max_iter: int = 100,
        random_state: int = 0,
        n_threads: Union[int, str] = 1,
    ):
        self.n_clusters = n_clusters
        self.seeding = seeding
        self.max_iter = max_iter
        self.random_state = random_state
        self.n_threads = n_threads

    def fit(self, X, y=None):
        if isinstance(X, OneHotMatrix):
            oh = X
            labels = np.asarray(y) if y is not None else None
        else:
            ds = as_dataset(X, labels=y)
            oh = one_hot(ds)
            labels = ds.labels
        config = ClusteringConfig(
            k=self.n_clusters,
            seeding=self.seeding,
            max_iter=self.max_iter,
            seed=self.random_state,
            n_threads=self.n_threads,
        )
        result = run_lloyd(oh, config, labels=labels)
        self.result_ = result
        self.labels_ = result.assignment
        self.cluster_centers_ = result.centers
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def predict(self, X) -> np.ndarray:
        """Nearest decoded center in the Hamming metric, lowest index ties."""
        _check_fitted(self)
        ds = as_dataset(X)
        dist = pairwise_hamming(ds.values, self.cluster_centers_)
        return dist.argmin(axis=1).astype(np.int32)
