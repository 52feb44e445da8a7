import numpy as np
import pytest

import scatterbox as sb
from scatterbox.annotate import AnnotatorBudget, propose_model
from scatterbox.regions import accept_model, score_model


@pytest.fixture(scope="module")
def tight_clusters():
    ds = sb.synth_clusters(6, 2, 300, 0.1, seed=11)
    split = sb.make_splits(ds, sb.SplitSizes(100, 100, 150, 400), seed=11)
    return ds, split


class TestBudget:
    def test_defaults(self):
        b = AnnotatorBudget()
        assert (b.max_rectangles, b.grid_resolution, b.target_accuracy) == (8, 16, 0.7)

    def test_validation(self):
        with pytest.raises(ValueError):
            AnnotatorBudget(max_rectangles=0)
        with pytest.raises(ValueError):
            AnnotatorBudget(target_accuracy=0.5)
        with pytest.raises(ValueError):
            AnnotatorBudget(target_accuracy=1.1)


class TestProposeModel:
    def test_separated_clusters_need_few_rectangles(self, tight_clusters):
        ds, split = tight_clusters
        model = propose_model(ds, split, sb.DimensionPair(0, 1), seed=0)
        assert len(model.rectangles) <= 2
        acc, covered, _ = score_model(model, ds, split.annotation_valid)
        assert covered > 0
        assert acc > 0.9

    def test_budget_of_one_rectangle(self, tight_clusters):
        ds, split = tight_clusters
        model = propose_model(ds, split, sb.DimensionPair(0, 1),
                              budget=AnnotatorBudget(max_rectangles=1), seed=0)
        assert len(model.rectangles) == 1

    def test_respects_max_rectangles_on_noise(self, cluster_dataset, cluster_split):
        for seed in range(5):
            model = propose_model(cluster_dataset, cluster_split,
                                  sb.DimensionPair(5, 7), seed=seed)
            assert 1 <= len(model.rectangles) <= 8

    def test_deterministic(self, cluster_dataset, cluster_split):
        a = propose_model(cluster_dataset, cluster_split, sb.DimensionPair(4, 8), seed=21)
        b = propose_model(cluster_dataset, cluster_split, sb.DimensionPair(4, 8), seed=21)
        assert a.model_id == b.model_id
        assert a.rectangles == b.rectangles

    def test_returned_unscored(self, tight_clusters):
        ds, split = tight_clusters
        model = propose_model(ds, split, sb.DimensionPair(0, 1), seed=0)
        assert model.validation_accuracy is None
        assert model.test_accuracy is None

    def test_noise_pair_mostly_rejected(self, cluster_dataset, cluster_split):
        rejections = 0
        for seed in range(100):
            model = propose_model(cluster_dataset, cluster_split,
                                  sb.DimensionPair(5, 7), seed=seed)
            if not accept_model(model, cluster_dataset, cluster_split):
                rejections += 1
        assert rejections > 50

    def test_greedy_train_balance_never_decreases(self, cluster_dataset, cluster_split):
        # replay the model's rectangles in draw order and track the running
        # correct-minus-incorrect balance on the annotation-train rows
        for pair in (sb.DimensionPair(0, 1), sb.DimensionPair(3, 9)):
            model = propose_model(cluster_dataset, cluster_split, pair, seed=2)
            uv, labels, _ = sb.normalize_pair(cluster_dataset, cluster_split, pair)
            covered = np.zeros(labels.size, dtype=bool)
            balance = 0
            for r in sorted(model.rectangles, key=lambda r: r.draw_order):
                claim = ~covered & np.asarray(r.contains(uv[:, 0], uv[:, 1]))
                gain = int(np.sum(labels[claim] == r.predicted_label)
                           - np.sum(labels[claim] != r.predicted_label))
                assert gain > 0
                covered |= claim
                balance += gain
            assert balance > 0
