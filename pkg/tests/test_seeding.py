import numpy as np
import pytest

from softmodes.generators import CcmSpec, generate_ccm
from softmodes.seeding import seed_centers, seed_distance, seed_uniform


def rows_as_set(matrix):
    return {tuple(row) for row in matrix.tolist()}


class TestSeedUniform:
    def test_k_equals_n_is_a_permutation(self):
        values = np.arange(24).reshape(8, 3)
        centers = seed_uniform(values, 8, np.random.default_rng(0))
        assert rows_as_set(centers) == rows_as_set(values)

    def test_k_one_returns_a_row(self):
        values = np.arange(20).reshape(5, 4)
        centers = seed_uniform(values, 1, np.random.default_rng(1))
        assert centers.shape == (1, 4)
        assert tuple(centers[0]) in rows_as_set(values)

    def test_k_above_n_rejected(self):
        with pytest.raises(ValueError):
            seed_uniform(np.zeros((3, 2), dtype=int), 4, np.random.default_rng(0))

    def test_single_draw_frequencies(self):
        # 10 distinct rows, k=1: each row should appear ~1/10 of the time.
        values = np.arange(10)[:, None]
        rng = np.random.default_rng(2)
        counts = np.zeros(10)
        trials = 10_000
        for _ in range(trials):
            counts[int(seed_uniform(values, 1, rng)[0, 0])] += 1
        np.testing.assert_allclose(counts / trials, 0.1, atol=0.02)

    def test_no_duplicate_rows_for_distinct_data(self):
        values = np.arange(30).reshape(10, 3)
        centers = seed_uniform(values, 6, np.random.default_rng(3))
        assert len(rows_as_set(centers)) == 6


class TestSeedDistance:
    def separated_instance(self):
        # two tight clusters of 10 points each; nearly all mass sits across
        spec = CcmSpec(n=20, d=400, k=2, epsilon=0.002, seed=77)
        return generate_ccm(spec)

    def exact_cross_probability(self, values, labels):
        """Brute-force law of the second center given a uniform first."""
        n = len(values)
        total = 0.0
        for first in range(n):
            dist = (values != values[first]).sum(axis=1).astype(float)
            cross = dist[labels != labels[first]].sum()
            total += cross / dist.sum()
        return total / n

    def test_second_center_crosses_blocks(self):
        ds = self.separated_instance()
        exact = self.exact_cross_probability(ds.values, ds.labels)
        assert exact > 0.99
        rng = np.random.default_rng(4)
        trials = 1000
        hits = 0
        label_of = {tuple(row): int(lab) for row, lab in zip(ds.values.tolist(), ds.labels)}
        for _ in range(trials):
            centers = seed_distance(ds.values, 2, rng)
            hits += label_of[tuple(centers[0])] != label_of[tuple(centers[1])]
        freq = hits / trials
        assert freq > 0.99
        sigma = np.sqrt(exact * (1 - exact) / trials)
        assert abs(freq - exact) <= max(4 * sigma, 0.005)

    def test_all_identical_points_fall_back_to_uniform(self):
        values = np.ones((6, 4), dtype=int)
        centers = seed_distance(values, 3, np.random.default_rng(5))
        assert centers.shape == (3, 4)
        assert (centers == 1).all()

    def test_k_one_returns_a_row(self):
        values = np.arange(12).reshape(4, 3)
        centers = seed_distance(values, 1, np.random.default_rng(6))
        assert tuple(centers[0]) in rows_as_set(values)

    def test_never_reselects_a_chosen_row(self):
        rng = np.random.default_rng(7)
        values = np.arange(40).reshape(10, 4)  # all rows distinct
        for _ in range(50):
            centers = seed_distance(values, 5, rng)
            assert len(rows_as_set(centers)) == 5

    def test_k_above_n_rejected(self):
        with pytest.raises(ValueError):
            seed_distance(np.zeros((2, 2), dtype=int), 3, np.random.default_rng(0))


class TestDeterminism:
    def test_same_seed_same_centers(self):
        values = np.random.default_rng(8).integers(0, 3, size=(50, 6))
        for method in ("random", "dsample"):
            a = seed_centers(values, 4, method, np.random.default_rng(99))
            b = seed_centers(values, 4, method, np.random.default_rng(99))
            assert np.array_equal(a, b)

    def test_centers_are_dataset_rows(self):
        rng = np.random.default_rng(9)
        values = rng.integers(0, 4, size=(30, 5))
        pool = rows_as_set(values)
        for method in ("random", "dsample"):
            centers = seed_centers(values, 6, method, np.random.default_rng(10))
            assert rows_as_set(centers) <= pool

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            seed_centers(np.zeros((4, 2), dtype=int), 2, "farthest", np.random.default_rng(0))
