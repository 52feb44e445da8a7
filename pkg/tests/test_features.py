import numpy as np
import pytest

import scatterbox as sb
from scatterbox.features import read_feature_csv, write_feature_csv

from conftest import identity_stats, plain_dataset


def accepted_model(rects, pair=(0, 1), test_accuracy=0.75, model_id="m0"):
    m = sb.RectangleModel(
        model_id=model_id, pair=sb.DimensionPair(*pair), stats=identity_stats(),
        rectangles=tuple(rects),
    )
    m.validation_accuracy = 0.8
    m.test_accuracy = test_accuracy
    return m


def rect(u0, u1, v0, v1, label=1, order=0):
    return sb.Rectangle(u_min=u0, u_max=u1, v_min=v0, v_max=v1,
                        predicted_label=label, draw_order=order)


def random_accepted_models(rng, n_models, n_dims):
    models = []
    for j in range(n_models):
        a, b = sorted(rng.choice(n_dims, size=2, replace=False))
        rects = []
        for k in range(int(rng.integers(1, 5))):
            u0 = float(rng.uniform(-2, 1.5))
            v0 = float(rng.uniform(-2, 1.5))
            rects.append(rect(u0, u0 + float(rng.uniform(0.2, 1.5)),
                              v0, v0 + float(rng.uniform(0.2, 1.5)),
                              label=int(rng.integers(2)), order=k))
        models.append(accepted_model(
            rects, pair=(int(a), int(b)),
            test_accuracy=float(rng.uniform(0.5, 1.0)), model_id=f"m{j}",
        ))
    return models


def oracle_feature(row, model, mode):
    """Independent re-derivation: explicit loops, no shared code path."""
    u = (row[model.pair.dim_a] - model.stats.mean_a) / model.stats.std_a
    v = (row[model.pair.dim_b] - model.stats.mean_b) / model.stats.std_b
    claiming = None
    for r in sorted(model.rectangles, key=lambda r: r.draw_order):
        if r.u_min <= u <= r.u_max and r.v_min <= v <= r.v_max:
            claiming = r
            break
    if claiming is None:
        return 0.0
    if mode == "literal":
        return model.test_accuracy
    return model.test_accuracy if claiming.predicted_label == 1 else -model.test_accuracy


class TestFeatureValue:
    def test_uncovered_is_zero_in_both_modes(self):
        m = accepted_model([rect(0, 1, 0, 1)])
        assert sb.feature_value([9.0, 9.0], m, "literal") == 0.0
        assert sb.feature_value([9.0, 9.0], m, "signed") == 0.0

    def test_covered_literal_is_test_accuracy(self):
        m = accepted_model([rect(0, 1, 0, 1)], test_accuracy=0.75)
        assert sb.feature_value([0.5, 0.5], m, "literal") == 0.75

    def test_signed_label_zero_negates(self):
        m = accepted_model([rect(0, 1, 0, 1, label=0)], test_accuracy=0.6)
        assert sb.feature_value([0.5, 0.5], m, "signed") == -0.6

    def test_unscored_model_rejected(self):
        m = sb.RectangleModel(model_id="x", pair=sb.DimensionPair(0, 1),
                              stats=identity_stats(), rectangles=(rect(0, 1, 0, 1),))
        with pytest.raises(ValueError, match="no test accuracy"):
            sb.feature_value([0.5, 0.5], m)

    def test_bad_mode(self):
        m = accepted_model([rect(0, 1, 0, 1)])
        with pytest.raises(ValueError, match="mode"):
            sb.feature_value([0.5, 0.5], m, "shifted")


class TestBuildFeatureMatrix:
    def test_single_model_column(self):
        ds = plain_dataset([[0.5, 0.5], [9, 9]], [1, 0])
        m = accepted_model([rect(0, 1, 0, 1)], test_accuracy=0.8)
        fm = sb.build_feature_matrix(ds, [0, 1], [m])
        assert fm.values[:, 0].tolist() == [0.8, 0.0]

    def test_empty_model_list_rejected(self):
        ds = plain_dataset([[0.5, 0.5]], [1])
        with pytest.raises(ValueError, match="at least one"):
            sb.build_feature_matrix(ds, [0], [])

    def test_matches_bruteforce_oracle(self):
        rng = np.random.default_rng(99)
        for trial in range(20):
            n, d = int(rng.integers(3, 30)), int(rng.integers(2, 6))
            pts = rng.uniform(-2.5, 2.5, size=(n, d))
            ds = plain_dataset(pts, rng.integers(0, 2, n))
            models = random_accepted_models(rng, int(rng.integers(1, 6)), d)
            for mode in ("literal", "signed"):
                fm = sb.build_feature_matrix(ds, np.arange(n), models, mode)
                for i in range(n):
                    for j, m in enumerate(models):
                        assert fm.values[i, j] == oracle_feature(pts[i], m, mode)

    def test_literal_entries_zero_or_column_accuracy(self):
        rng = np.random.default_rng(7)
        pts = rng.uniform(-2, 2, size=(50, 3))
        ds = plain_dataset(pts, rng.integers(0, 2, 50))
        models = random_accepted_models(rng, 6, 3)
        fm = sb.build_feature_matrix(ds, np.arange(50), models, "literal")
        for j, m in enumerate(models):
            assert set(np.unique(fm.values[:, j])) <= {0.0, m.test_accuracy}

    def test_signed_magnitudes_match_literal(self):
        rng = np.random.default_rng(8)
        pts = rng.uniform(-2, 2, size=(40, 4))
        ds = plain_dataset(pts, rng.integers(0, 2, 40))
        models = random_accepted_models(rng, 5, 4)
        lit = sb.build_feature_matrix(ds, np.arange(40), models, "literal")
        sig = sb.build_feature_matrix(ds, np.arange(40), models, "signed")
        assert np.array_equal(np.abs(sig.values), lit.values)

    def test_column_permutation_tracks_models(self):
        rng = np.random.default_rng(9)
        pts = rng.uniform(-2, 2, size=(30, 3))
        ds = plain_dataset(pts, rng.integers(0, 2, 30))
        models = random_accepted_models(rng, 4, 3)
        base = sb.build_feature_matrix(ds, np.arange(30), models)
        perm = [2, 0, 3, 1]
        shuffled = sb.build_feature_matrix(ds, np.arange(30), [models[i] for i in perm])
        assert np.array_equal(shuffled.values, base.values[:, perm])


class TestAtSurveyScale:
    def test_320_models_give_a_2000_by_320_matrix(self):
        rng = np.random.default_rng(14)
        pts = rng.uniform(-2, 2, size=(2000, 6))
        ds = plain_dataset(pts, rng.integers(0, 2, 2000))
        models = random_accepted_models(rng, 320, 6)
        fm = sb.build_feature_matrix(ds, np.arange(2000), models)
        assert fm.values.shape == (2000, 320)
        assert len(fm.model_ids) == 320

    def test_73_distinct_dimensions_survive_the_union(self):
        rng = np.random.default_rng(15)
        models = []
        dims = list(range(73))
        rng.shuffle(dims)
        for k in range(0, 72, 2):
            a, b = sorted((dims[k], dims[k + 1]))
            models.append(accepted_model([rect(0, 1, 0, 1)], pair=(a, b),
                                         model_id=f"m{k}"))
        models.append(accepted_model([rect(0, 1, 0, 1)],
                                     pair=tuple(sorted((dims[72], dims[0]))),
                                     model_id="m-last"))
        assert len(sb.used_dimensions(models)) == 73


class TestUsedDimensions:
    def test_union(self):
        models = [accepted_model([rect(0, 1, 0, 1)], pair=(0, 3)),
                  accepted_model([rect(0, 1, 0, 1)], pair=(3, 7))]
        assert sb.used_dimensions(models) == (0, 3, 7)

    def test_single_model(self):
        models = [accepted_model([rect(0, 1, 0, 1)], pair=(2, 4))]
        assert sb.used_dimensions(models) == (2, 4)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sb.used_dimensions([])


class TestCsvRoundtrip:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(10)
        pts = rng.uniform(-2, 2, size=(20, 3))
        ds = plain_dataset(pts, rng.integers(0, 2, 20))
        models = random_accepted_models(rng, 3, 3)
        fm = sb.build_feature_matrix(ds, np.arange(20), models)
        path = tmp_path / "features.csv"
        write_feature_csv(fm, path, dataset_hash="abc123", seed=7)
        back, ds_hash, seed = read_feature_csv(path)
        assert ds_hash == "abc123" and seed == 7
        assert back.model_ids == fm.model_ids
        assert np.array_equal(back.values, fm.values)
        assert np.array_equal(back.labels, fm.labels)
        assert back.sample_indices == fm.sample_indices


class TestTransformer:
    def test_fit_transform_matches_function(self):
        rng = np.random.default_rng(11)
        X = rng.uniform(-2, 2, size=(25, 4))
        models = random_accepted_models(rng, 3, 4)
        tr = sb.RegionFeatureTransformer(models=models, mode="signed").fit(X)
        assert np.array_equal(tr.transform(X), sb.transform_rows(X, models, "signed"))
        assert list(tr.get_feature_names_out()) == [m.model_id for m in models]

    def test_unfitted_transform_rejected(self):
        rng = np.random.default_rng(12)
        models = random_accepted_models(rng, 2, 3)
        tr = sb.RegionFeatureTransformer(models=models)
        with pytest.raises(Exception):
            tr.transform(np.zeros((3, 3)))

    def test_width_mismatch_rejected(self):
        rng = np.random.default_rng(13)
        X = rng.uniform(-1, 1, size=(10, 4))
        models = random_accepted_models(rng, 2, 4)
        tr = sb.RegionFeatureTransformer(models=models).fit(X)
        with pytest.raises(ValueError, match="features"):
            tr.transform(X[:, :3])

    def test_get_params_round_trip(self):
        tr = sb.RegionFeatureTransformer(mode="signed")
        params = tr.get_params()
        assert params["mode"] == "signed"
        tr.set_params(mode="literal")
        assert tr.mode == "literal"
