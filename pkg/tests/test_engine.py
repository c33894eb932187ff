import numpy as np
import pytest

from softmodes.dataset import as_dataset, one_hot
from softmodes.engine import (
    ClusteringConfig,
    assign,
    hamming,
    objective,
    pairwise_hamming,
    run_lloyd,
    run_softmodes,
    update_center,
)
from softmodes.generators import CcmSpec, generate_ccm
from softmodes.rounding import RoundingSpec

PLU = RoundingSpec.plurality()
UNI = RoundingSpec.uniform()


def brute_force_distances(values, centers):
    out = np.zeros((len(values), len(centers)), dtype=np.int64)
    for i, row in enumerate(values):
        for m, center in enumerate(centers):
            out[i, m] = sum(int(a != b) for a, b in zip(row, center))
    return out


class TestHamming:
    def test_identical_vectors(self):
        assert hamming([1, 2, 3], [1, 2, 3]) == 0

    def test_binary_complement(self):
        a = np.array([0, 1, 0, 1, 1])
        assert hamming(a, 1 - a) == 5

    def test_hand_counted_pair(self):
        assert hamming(np.array([0, 1, 2, 1]), np.array([0, 2, 2, 0])) == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            hamming([0, 1], [0, 1, 2])


class TestPairwiseHamming:
    def test_matches_brute_force_general(self):
        rng = np.random.default_rng(0)
        values = rng.integers(0, 4, size=(15, 6))
        centers = rng.integers(0, 4, size=(3, 6))
        np.testing.assert_array_equal(
            pairwise_hamming(values, centers), brute_force_distances(values, centers)
        )

    def test_binary_matmul_path_matches_brute_force(self):
        rng = np.random.default_rng(1)
        values = rng.integers(0, 2, size=(40, 25))
        centers = rng.integers(0, 2, size=(5, 25))
        got = pairwise_hamming(values, centers)
        np.testing.assert_array_equal(got, brute_force_distances(values, centers))

    def test_thread_count_does_not_change_output(self):
        rng = np.random.default_rng(2)
        values = rng.integers(0, 3, size=(101, 9))
        centers = rng.integers(0, 3, size=(4, 9))
        base = pairwise_hamming(values, centers, n_threads=1)
        np.testing.assert_array_equal(pairwise_hamming(values, centers, n_threads=3), base)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pairwise_hamming(np.zeros((3, 2), dtype=int), np.zeros((2, 3), dtype=int))


class TestAssign:
    def test_exact_match_wins(self):
        values = np.array([[1, 2, 3, 0]])
        centers = np.array([[0, 0, 0, 0], [9, 9, 9, 9], [1, 2, 3, 0]]) % 4
        got = assign(values, centers, np.random.default_rng(0))
        assert got.tolist() == [2]

    def test_tie_break_frequency(self):
        values = np.array([[0, 1]])
        centers = np.array([[0, 0], [1, 1]])  # both at distance 1
        rng = np.random.default_rng(3)
        picks = np.array([assign(values, centers, rng)[0] for _ in range(10_000)])
        freq = (picks == 0).mean()
        assert abs(freq - 0.5) <= 0.02

    def test_k_one_assigns_everything_to_zero(self):
        rng = np.random.default_rng(4)
        values = rng.integers(0, 3, size=(30, 4))
        got = assign(values, values[:1], np.random.default_rng(0))
        assert (got == 0).all()

    def test_assigned_center_is_always_a_minimizer(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            values = rng.integers(0, 3, size=(rng.integers(2, 20), 5))
            centers = rng.integers(0, 3, size=(rng.integers(1, 5), 5))
            a = assign(values, centers, np.random.default_rng(int(rng.integers(1 << 30))))
            dist = brute_force_distances(values, centers)
            assert (dist[np.arange(len(values)), a] == dist.min(axis=1)).all()


class TestUpdateCenter:
    def test_plurality_majority_is_deterministic(self):
        rows = np.array([[1]] * 6 + [[0]] * 4)
        for seed in range(10):
            center = update_center(rows, [2], PLU, np.random.default_rng(seed))
            assert center.tolist() == [1]

    def test_uniform_samples_the_frequency(self):
        rows = np.array([[1]] * 3 + [[0]] * 7)
        rng = np.random.default_rng(6)
        draws = np.array([update_center(rows, [2], UNI, rng)[0] for _ in range(10_000)])
        assert abs(draws.mean() - 0.3) <= 0.02

    def test_single_point_cluster_passes_through_any_rounding(self):
        row = np.array([[2, 0, 1]])
        for spec in (PLU, UNI, RoundingSpec.soft(2.0), RoundingSpec.soft(17.0)):
            center = update_center(row, [3, 2, 4], spec, np.random.default_rng(7))
            assert center.tolist() == [2, 0, 1]

    def test_empty_cluster_rejected(self):
        with pytest.raises(ValueError):
            update_center(np.zeros((0, 3), dtype=int), [2, 2, 2], PLU, np.random.default_rng(0))


class TestObjective:
    def test_zero_when_points_sit_on_centers(self):
        values = np.array([[0, 1], [2, 2]])
        assert objective(values, values.copy(), np.array([0, 1])) == 0

    def test_single_displaced_point(self):
        values = np.array([[0, 0, 0, 0], [1, 1, 1, 0]])
        centers = np.array([[0, 0, 0, 0]])
        assert objective(values, centers, np.array([0, 0])) == 3

    def test_matches_independent_resummation(self):
        rng = np.random.default_rng(8)
        values = rng.integers(0, 4, size=(10, 6))
        centers = rng.integers(0, 4, size=(3, 6))
        a = rng.integers(0, 3, size=10)
        expected = sum(
            sum(int(x != c) for x, c in zip(values[i], centers[a[i]])) for i in range(10)
        )
        assert objective(values, centers, a) == expected


def repeated_rows_dataset():
    rows = np.array([[0, 0, 2], [1, 1, 0], [2, 2, 1]])
    values = np.repeat(rows, 5, axis=0)
    labels = np.repeat(np.arange(3), 5)
    return as_dataset(values, labels=labels)


class TestRunSoftmodes:
    def test_fixed_point_converges_in_two_iterations(self):
        ds = repeated_rows_dataset()
        for spec in (PLU, UNI, RoundingSpec.soft(4.0)):
            config = ClusteringConfig(k=3, rounding=spec, seeding="dsample", seed=11)
            result = run_softmodes(ds, config)
            assert result.converged and result.iterations == 2
            assert len(result.trace) == 2
            assert result.trace[-1].accuracy == 1.0
            assert result.trace[-1].objective == 0

    def test_soft_one_equals_uniform_exactly(self):
        ds = generate_ccm(CcmSpec(n=120, d=10, k=3, epsilon=0.25, seed=5))
        base = ClusteringConfig(k=3, rounding=UNI, seeding="random", seed=42, max_iter=30)
        soft = ClusteringConfig(k=3, rounding=RoundingSpec.soft(1.0), seeding="random", seed=42, max_iter=30)
        a = run_softmodes(ds, base)
        b = run_softmodes(ds, soft)
        assert np.array_equal(a.assignment, b.assignment)
        assert np.array_equal(a.centers, b.centers)
        assert a.iterations == b.iterations
        assert [s.objective for s in a.trace] == [s.objective for s in b.trace]

    def test_bit_identical_across_repeats_and_threads(self):
        ds = generate_ccm(CcmSpec(n=150, d=12, k=4, epsilon=0.2, seed=6))
        runs = []
        for n_threads in (1, 1, 4):
            config = ClusteringConfig(
                k=4, rounding=RoundingSpec.soft(2.0), seeding="dsample",
                seed=9, max_iter=40, n_threads=n_threads,
            )
            runs.append(run_softmodes(ds, config))
        for other in runs[1:]:
            assert np.array_equal(runs[0].assignment, other.assignment)
            assert np.array_equal(runs[0].centers, other.centers)
            assert [s.objective for s in runs[0].trace] == [s.objective for s in other.trace]

    def test_plurality_objective_is_monotone(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            n = int(rng.integers(20, 120))
            d = int(rng.integers(3, 15))
            values = rng.integers(0, 3, size=(n, d))
            config = ClusteringConfig(
                k=int(rng.integers(2, 5)), rounding=PLU, seeding="random",
                seed=int(rng.integers(1 << 30)), max_iter=50,
            )
            result = run_softmodes(as_dataset(values), config)
            objectives = [s.objective for s in result.trace]
            assert (np.diff(objectives) <= 0).all()

    def test_degenerate_duplicates_never_crash(self):
        values = np.zeros((4, 3), dtype=int)
        for seed in range(10):
            config = ClusteringConfig(k=2, rounding=PLU, seeding="random", seed=seed, max_iter=50)
            result = run_softmodes(as_dataset(values), config)
            assert result.assignment.shape == (4,)
            assert set(result.assignment.tolist()) <= {0, 1}
            assert len(result.trace) == result.iterations <= 50

    def test_trace_has_no_accuracy_without_labels(self):
        values = np.random.default_rng(11).integers(0, 2, size=(30, 5))
        config = ClusteringConfig(k=2, rounding=UNI, seeding="random", seed=3, max_iter=10)
        result = run_softmodes(as_dataset(values), config)
        assert all(s.accuracy is None for s in result.trace)

    def test_k_above_n_rejected(self):
        with pytest.raises(ValueError):
            run_softmodes(as_dataset(np.zeros((2, 2), dtype=int)), ClusteringConfig(k=3))

    def test_centers_respect_domains(self):
        ds = generate_ccm(CcmSpec(n=80, d=6, k=3, epsilon=0.3, seed=8))
        result = run_softmodes(ds, ClusteringConfig(k=3, seed=1))
        assert result.centers.shape == (3, 6)
        assert result.centers.min() >= 0 and result.centers.max() <= 1


class TestRunLloyd:
    def test_k_one_centroid_is_the_column_mean(self):
        rng = np.random.default_rng(12)
        values = np.column_stack([rng.integers(0, a, size=12) for a in (2, 3, 2)])
        oh = one_hot(as_dataset(values, arities=[2, 3, 2]))
        result = run_lloyd(oh, ClusteringConfig(k=1, seed=0, max_iter=10))
        assert result.converged and result.iterations == 2
        mean = oh.matrix.mean(axis=0)
        expected_inertia = float(((oh.matrix - mean) ** 2).sum())
        assert result.trace[1].objective == pytest.approx(expected_inertia, rel=1e-12)
        # decoded center is the per-attribute argmax of the mean
        for j in range(3):
            block = mean[oh.offsets[j] : oh.offsets[j + 1]]
            assert result.centers[0, j] == int(block.argmax())

    def test_separated_clouds_split_perfectly(self):
        values = np.vstack([np.zeros((6, 8), dtype=int), np.ones((6, 8), dtype=int)])
        labels = np.repeat([0, 1], 6)
        oh = one_hot(as_dataset(values, labels=labels, arities=[2] * 8))
        result = run_lloyd(oh, ClusteringConfig(k=2, seeding="dsample", seed=4), labels=labels)
        assert result.converged
        assert result.trace[0].accuracy == 1.0
        assert result.trace[-1].accuracy == 1.0

    def test_bit_identical_across_repeats_and_threads(self):
        ds = generate_ccm(CcmSpec(n=140, d=10, k=3, epsilon=0.2, seed=13))
        oh = one_hot(ds)
        runs = [
            run_lloyd(oh, ClusteringConfig(k=3, seeding="dsample", seed=21, n_threads=t), labels=ds.labels)
            for t in (1, 1, 4)
        ]
        for other in runs[1:]:
            assert np.array_equal(runs[0].assignment, other.assignment)
            assert np.array_equal(runs[0].centers, other.centers)
            assert [s.objective for s in runs[0].trace] == [s.objective for s in other.trace]

    def test_k_above_n_rejected(self):
        oh = one_hot(as_dataset(np.zeros((2, 2), dtype=int)))
        with pytest.raises(ValueError):
            run_lloyd(oh, ClusteringConfig(k=5))


class TestClusteringConfig:
    def test_invalid_k(self):
        with pytest.raises(ValueError):
            ClusteringConfig(k=0)

    def test_invalid_max_iter(self):
        with pytest.raises(ValueError):
            ClusteringConfig(k=2, max_iter=0)

    def test_invalid_threads(self):
        with pytest.raises(ValueError):
            ClusteringConfig(k=2, n_threads=0)

    def test_auto_threads_resolves(self):
        assert ClusteringConfig(k=2, n_threads="auto").resolve_threads() >= 1
