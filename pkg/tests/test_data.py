import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import scatterbox as sb
from scatterbox.data import DatasetError, save_csv, save_schema


def write_csv(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_smallest_well_formed(self, tmp_path):
        path = write_csv(tmp_path, "x,y,cls\n1.0,2.0,a\n2.0,1.0,b\n3.0,0.5,a\n4.0,0.1,b\n")
        schema = [("x", sb.ColumnKind.CONTINUOUS), ("y", sb.ColumnKind.CONTINUOUS),
                  ("cls", sb.ColumnKind.NOMINAL)]
        ds = sb.load_csv(path, schema, "cls")
        assert ds.n_dims == 2
        assert ds.n_samples == 4
        # 'a' < 'b' lexicographically, so a -> 0
        assert ds.labels.tolist() == [0, 1, 0, 1]

    def test_credit_shaped_dimension_count(self, tmp_path):
        # 6 integer + 4 continuous feature columns
        names = [f"i{k}" for k in range(6)] + [f"c{k}" for k in range(4)]
        schema = [(n, sb.ColumnKind.INTEGER) for n in names[:6]]
        schema += [(n, sb.ColumnKind.CONTINUOUS) for n in names[6:]]
        schema.append(("target", sb.ColumnKind.NOMINAL))
        rows = ["1,2,3,4,5,6,0.1,0.2,0.3,0.4,yes", "6,5,4,3,2,1,0.4,0.3,0.2,0.1,no"]
        path = write_csv(tmp_path, ",".join(names + ["target"]) + "\n" + "\n".join(rows) + "\n")
        ds = sb.load_csv(path, schema, "target")
        assert ds.n_dims == 10

    def test_float_in_integer_column_rejected(self, tmp_path):
        path = write_csv(tmp_path, "a,b,cls\n3.5,1,x\n2,1,y\n")
        schema = [("a", sb.ColumnKind.INTEGER), ("b", sb.ColumnKind.INTEGER),
                  ("cls", sb.ColumnKind.NOMINAL)]
        with pytest.raises(DatasetError, match="integer column 'a'"):
            sb.load_csv(path, schema, "cls")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            sb.load_csv(tmp_path / "nope.csv", [("a", sb.ColumnKind.CONTINUOUS)], "a")

    def test_header_mismatch(self, tmp_path):
        path = write_csv(tmp_path, "a,b,cls\n1,2,x\n")
        schema = [("a", sb.ColumnKind.CONTINUOUS), ("z", sb.ColumnKind.CONTINUOUS),
                  ("cls", sb.ColumnKind.NOMINAL)]
        with pytest.raises(DatasetError, match="header mismatch"):
            sb.load_csv(path, schema, "cls")

    def test_empty_file(self, tmp_path):
        path = write_csv(tmp_path, "")
        with pytest.raises(DatasetError, match="empty"):
            sb.load_csv(path, [("a", sb.ColumnKind.CONTINUOUS),
                               ("b", sb.ColumnKind.CONTINUOUS),
                               ("cls", sb.ColumnKind.NOMINAL)], "cls")

    def test_more_than_two_label_values(self, tmp_path):
        path = write_csv(tmp_path, "a,b,cls\n1,2,x\n2,3,y\n3,4,z\n")
        schema = [("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS),
                  ("cls", sb.ColumnKind.NOMINAL)]
        with pytest.raises(DatasetError, match="exactly 2 distinct"):
            sb.load_csv(path, schema, "cls")

    def test_nominal_first_appearance_coding(self, tmp_path):
        path = write_csv(tmp_path, "color,n,cls\nred,1,a\nblue,2,b\nred,3,a\ngreen,4,b\n")
        schema = [("color", sb.ColumnKind.NOMINAL), ("n", sb.ColumnKind.INTEGER),
                  ("cls", sb.ColumnKind.NOMINAL)]
        ds = sb.load_csv(path, schema, "cls")
        assert ds.rows[:, 0].tolist() == [0.0, 1.0, 0.0, 2.0]

    def test_roundtrip_via_save(self, tmp_path, cluster_dataset):
        path = tmp_path / "round.csv"
        save_csv(cluster_dataset, path)
        schema = list(cluster_dataset.columns) + [("label", sb.ColumnKind.INTEGER)]
        back = sb.load_csv(path, schema, "label")
        assert np.array_equal(back.rows, cluster_dataset.rows)
        assert np.array_equal(back.labels, cluster_dataset.labels)


class TestSchemaSidecar:
    def test_roundtrip(self, tmp_path):
        schema = [("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.INTEGER),
                  ("c", sb.ColumnKind.NOMINAL)]
        path = tmp_path / "s.csv"
        save_schema(path, schema)
        assert sb.load_schema(path) == schema

    def test_bad_kind(self, tmp_path):
        path = write_csv(tmp_path, "a,floatish\n", name="s.csv")
        with pytest.raises(DatasetError, match="unknown column kind"):
            sb.load_schema(path)


class TestBalance:
    def test_downsamples_majority(self):
        rng = np.random.default_rng(0)
        rows = rng.normal(size=(100, 2))
        labels = np.array([1] * 60 + [0] * 40)
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, labels)
        out = sb.balance_classes(ds, seed=5)
        assert out.label_counts() == (40, 40)

    def test_already_balanced_identity_multiset(self):
        rng = np.random.default_rng(1)
        rows = rng.normal(size=(100, 2))
        labels = np.array([0, 1] * 50)
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, labels)
        out = sb.balance_classes(ds, seed=9)
        assert sorted(map(tuple, out.rows)) == sorted(map(tuple, rows))

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        rows = rng.normal(size=(90, 2))
        labels = np.array([1] * 60 + [0] * 30)
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, labels)
        a = sb.balance_classes(ds, seed=3)
        b = sb.balance_classes(ds, seed=3)
        assert np.array_equal(a.rows, b.rows)
        assert np.array_equal(a.labels, b.labels)

    @given(n0=st.integers(1, 40), n1=st.integers(1, 40), seed=st.integers(0, 2**16))
    @settings(max_examples=40, deadline=None)
    def test_output_rows_subset_of_input(self, n0, n1, seed):
        rng = np.random.default_rng(seed)
        rows = rng.normal(size=(n0 + n1, 2))
        labels = np.array([0] * n0 + [1] * n1)
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, labels)
        out = sb.balance_classes(ds, seed=seed)
        assert out.label_counts()[0] == out.label_counts()[1] == min(n0, n1)
        pool = {tuple(r) for r in rows}
        assert all(tuple(r) in pool for r in out.rows)


class TestSplits:
    def test_sizes_and_disjointness(self, cluster_dataset):
        split = sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 1400), seed=7)
        assert split.annotation_train.size == 100
        assert split.annotation_valid.size == 100
        assert split.annotation_test.size == 200
        assert split.learner_train.size == 1000
        assert split.learner_test.size == 600
        combined = split.all_indices()
        assert combined.size == len(set(combined.tolist())) == 2000

    def test_holdout_size_follows_pool(self):
        # 2600 rows with a 2000-row pool leaves a 600-row holdout
        ds = sb.synth_clusters(4, 2, 1300, 0.5, seed=1)
        split = sb.make_splits(ds, sb.SplitSizes(100, 100, 200, 2000), seed=1)
        assert split.learner_test.size == 600

    def test_oversized_request_rejected(self, cluster_dataset):
        with pytest.raises(DatasetError):
            sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 2000), seed=0)

    def test_annotation_never_in_holdout(self, cluster_dataset):
        split = sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 1400), seed=3)
        holdout = set(split.learner_test.tolist())
        for name in ("annotation_train", "annotation_valid", "annotation_test"):
            assert not holdout & set(getattr(split, name).tolist())

    @given(seed=st.integers(0, 2**16))
    @settings(max_examples=25, deadline=None)
    def test_stratification_within_one(self, cluster_dataset, seed):
        split = sb.make_splits(cluster_dataset, sb.SplitSizes(99, 101, 200, 1399), seed=seed)
        labels = cluster_dataset.labels
        for name in split._fields():
            idx = getattr(split, name)
            ones = int(labels[idx].sum())
            assert abs(ones - (idx.size - ones)) <= 1, name

    def test_deterministic(self, cluster_dataset):
        a = sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 1400), seed=11)
        b = sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 1400), seed=11)
        for name in a._fields():
            assert np.array_equal(getattr(a, name), getattr(b, name))


class TestSynthClusters:
    def test_counts(self):
        ds = sb.synth_clusters(10, 2, 1000, 0.5, seed=0)
        assert ds.n_samples == 2000
        assert ds.n_dims == 10
        assert ds.label_counts() == (1000, 1000)

    def test_zero_spread_separable(self):
        ds = sb.synth_clusters(2, 2, 50, 0.0, seed=0)
        # class clusters collapse onto their mirrored centers
        for label, center in ((0, 1.0), (1, -1.0)):
            rows = ds.rows[ds.labels == label]
            assert np.allclose(rows, center)

    def test_byte_identical_under_seed(self):
        a = sb.synth_clusters(6, 3, 100, 0.7, seed=42)
        b = sb.synth_clusters(6, 3, 100, 0.7, seed=42)
        assert a.rows.tobytes() == b.rows.tobytes()
        assert a.labels.tobytes() == b.labels.tobytes()

    def test_bad_counts(self):
        with pytest.raises(DatasetError):
            sb.synth_clusters(2, 3, 10, 0.5, seed=0)
        with pytest.raises(DatasetError):
            sb.synth_clusters(5, 2, 0, 0.5, seed=0)


class TestNormalizePair:
    def test_hand_computed_z_scores(self):
        # annotation-train values {1,2,3}: mean 2, population stddev sqrt(2/3)
        rows = np.array([[1.0, 5.0], [2.0, 6.0], [3.0, 7.0], [9.9, 1.1],
                         [4.0, 2.0], [5.0, 3.0], [6.0, 4.0]])
        labels = np.array([0, 1, 0, 1, 0, 1, 0])
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, labels)
        split = sb.SplitSet(
            annotation_train=np.array([0, 1, 2]),
            annotation_valid=np.array([3]),
            annotation_test=np.array([4]),
            learner_train=np.array([5]),
            learner_test=np.array([6]),
        )
        uv, y, stats = sb.normalize_pair(ds, split, (0, 1))
        assert uv[:, 0] == pytest.approx([-1.224744871, 0.0, 1.224744871])
        assert stats.std_a == pytest.approx(0.816496580927726)
        # applying the stats to the mean gives exactly 0
        u, v = stats.apply([2.0], [6.0])
        assert u[0] == 0.0 and v[0] == 0.0

    def test_constant_column_rejected(self, cluster_dataset):
        rows = np.column_stack([cluster_dataset.rows[:, 0],
                                np.full(cluster_dataset.n_samples, 3.25)])
        ds = sb.Dataset("t", (("a", sb.ColumnKind.CONTINUOUS), ("b", sb.ColumnKind.CONTINUOUS)),
                        rows, cluster_dataset.labels)
        split = sb.make_splits(ds, sb.SplitSizes(50, 50, 50, 300), seed=0)
        with pytest.raises(sb.ZeroVarianceError):
            sb.normalize_pair(ds, split, (0, 1))

    def test_train_rows_standardized(self, cluster_dataset, cluster_split):
        uv, _, _ = sb.normalize_pair(cluster_dataset, cluster_split, (2, 5))
        assert abs(uv.mean(axis=0)).max() < 1e-9
        assert abs(uv.std(axis=0) - 1.0).max() < 1e-9
