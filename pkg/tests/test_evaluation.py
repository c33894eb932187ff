import numpy as np
import pytest

from softmodes.evaluation import (
    accuracy,
    confusion_matrix,
    matched_count_exhaustive,
    matched_count_hungarian,
)


class TestConfusionMatrix:
    def test_perfect_balanced_prediction(self):
        pred = np.array([0, 0, 1, 1])
        m = confusion_matrix(pred, pred)
        assert m.tolist() == [[2, 0], [0, 2]]

    def test_constant_prediction_single_row(self):
        m = confusion_matrix([0, 0, 0, 0], [0, 1, 2, 1])
        assert m.shape == (1, 3)
        assert m.tolist() == [[1, 2, 1]]

    def test_matches_hand_tally(self):
        pred = [0, 1, 1, 2, 0, 2, 1, 0]
        truth = [1, 1, 0, 2, 1, 2, 0, 0]
        m = confusion_matrix(pred, truth)
        assert m.tolist() == [[1, 2, 0], [2, 1, 0], [0, 0, 2]]
        assert m.sum() == 8

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            confusion_matrix([0, 1], [0])


class TestAccuracy:
    def test_identity_is_one(self):
        truth = np.array([0, 1, 2, 1, 0])
        assert accuracy(truth, truth) == 1.0

    def test_swapped_binary_labels_still_one(self):
        truth = np.array([0, 1, 0, 1])
        assert accuracy(1 - truth, truth) == 1.0

    def test_random_balanced_binary_near_half(self):
        rng = np.random.default_rng(0)
        n = 10_000
        truth = np.repeat([0, 1], n // 2)
        pred = rng.integers(0, 2, size=n)
        assert abs(accuracy(pred, truth) - 0.5) <= 0.02

    def test_relabeling_invariance_both_sides(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            k = int(rng.integers(2, 6))
            pred = rng.integers(0, k, size=60)
            truth = rng.integers(0, k, size=60)
            base = accuracy(pred, truth)
            perm_p = rng.permutation(k)
            perm_t = rng.permutation(k)
            assert accuracy(perm_p[pred], truth) == base
            assert accuracy(pred, perm_t[truth]) == base

    def test_maximality_beats_identity_mapping(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            pred = rng.integers(0, 4, size=50)
            truth = rng.integers(0, 4, size=50)
            assert accuracy(pred, truth) >= (pred == truth).mean()

    def test_fewer_predicted_clusters_than_truth(self):
        pred = [0, 0, 0, 1, 1, 1]
        truth = [0, 0, 1, 2, 2, 1]
        # best injective map: 0 -> 0 (2 points), 1 -> 2 (2 points)
        assert accuracy(pred, truth) == pytest.approx(4 / 6)

    def test_matchers_agree_on_random_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            kp = int(rng.integers(1, 7))
            kt = int(rng.integers(1, 7))
            pred = rng.integers(0, kp, size=int(rng.integers(5, 80)))
            truth = rng.integers(0, kt, size=len(pred))
            m = confusion_matrix(pred, truth)
            assert matched_count_exhaustive(m) == matched_count_hungarian(m)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            accuracy([], [])

    def test_exhaustive_cap(self):
        with pytest.raises(ValueError):
            matched_count_exhaustive(np.zeros((7, 7), dtype=int))
