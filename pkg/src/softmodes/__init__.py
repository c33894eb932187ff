"""Categorical clustering with soft-rounded center updates.

The package provides the rounded-center clustering family (plurality gives
k-modes, soft(t) interpolates toward sampling the empirical distribution),
a Lloyd baseline on one-hot encodings, synthetic benchmark generators, a
matching-based accuracy score, and an experiment harness.
"""

from .dataset import (
    AttributeDomain,
    CategoricalDataset,
    DatasetParseError,
    OneHotMatrix,
    as_dataset,
    load_assignments,
    load_csv,
    one_hot,
    save_assignments,
    save_csv,
)
from .engine import (
    ClusteringConfig,
    ClusteringResult,
    IterationStats,
    assign,
    hamming,
    objective,
    pairwise_hamming,
    run_lloyd,
    run_softmodes,
    update_center,
    update_centers,
)
from .estimators import OneHotKMeans, SoftModes
from .evaluation import accuracy, confusion_matrix
from .generators import (
    BbmSpec,
    CcmSpec,
    ccm_centers,
    generate_bbm,
    generate_ccm,
    max_noise_accuracy,
    near_equal_split,
)
from .harness import AlgorithmSpec, ExperimentSpec, emit_plot, run_experiment, write_results
from .rounding import RoundingSpec, check_simplex, field_grid, round_simplex, sample_category
from .seeding import seed_centers, seed_distance, seed_uniform

__version__ = "0.1.0"

__all__ = [
    "AttributeDomain",
    "CategoricalDataset",
    "DatasetParseError",
    "OneHotMatrix",
    "as_dataset",
    "load_assignments",
    "load_csv",
    "one_hot",
    "save_assignments",
    "save_csv",
    "ClusteringConfig",
    "ClusteringResult",
    "IterationStats",
    "assign",
    "hamming",
    "objective",
    "pairwise_hamming",
    "run_lloyd",
    "run_softmodes",
    "update_center",
    "update_centers",
    "OneHotKMeans",
    "SoftModes",
    "accuracy",
    "confusion_matrix",
    "BbmSpec",
    "CcmSpec",
    "ccm_centers",
    "generate_bbm",
    "generate_ccm",
    "max_noise_accuracy",
    "near_equal_split",
    "AlgorithmSpec",
    "ExperimentSpec",
    "emit_plot",
    "run_experiment",
    "write_results",
    "RoundingSpec",
    "check_simplex",
    "field_grid",
    "round_simplex",
    "sample_category",
    "seed_centers",
    "seed_distance",
    "seed_uniform",
    "__version__",
]
