import json

import pytest
from click.testing import CliRunner

from scatterbox.cli import main


SIZES = "60,60,80,280"


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory):
    """synth + auto-annotate once; read-only for the tests below."""
    root = tmp_path_factory.mktemp("pipeline")
    runner = CliRunner()
    res = runner.invoke(main, [
        "synth", "--dims", "5", "--informative", "5", "--per-class", "200",
        "--spread", "0.3", "--seed", "7", "--out", str(root / "data.csv"),
    ])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, [
        "auto-annotate", "--csv", str(root / "data.csv"),
        "--schema", str(root / "data.schema.csv"), "--seed", "7",
        "--sizes", SIZES, "--pairs", "10", "--run-dir", str(root / "run"),
    ])
    assert res.exit_code == 0, res.output
    return root


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


class TestSynth:
    def test_writes_csv_and_schema(self, tmp_path):
        res = invoke("synth", "--dims", 4, "--informative", 2, "--per-class", 10,
                     "--seed", 3, "--out", tmp_path / "d.csv")
        assert res.exit_code == 0
        assert (tmp_path / "d.csv").exists()
        assert (tmp_path / "d.schema.csv").exists()

    def test_bad_counts_fail_cleanly(self, tmp_path):
        res = invoke("synth", "--dims", 2, "--informative", 5, "--per-class", 10,
                     "--out", tmp_path / "d.csv")
        assert res.exit_code != 0
        assert "d_informative" in res.output


class TestIngest:
    def test_summary(self, pipeline_dir):
        res = invoke("ingest", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7)
        assert res.exit_code == 0
        assert "rows       400" in res.output
        assert "0: 200  1: 200" in res.output


class TestPairs:
    def test_deterministic_output(self, pipeline_dir):
        args = ("pairs", "--csv", pipeline_dir / "data.csv",
                "--schema", pipeline_dir / "data.schema.csv",
                "--seed", 7, "--sizes", SIZES, "--k", 5, "--mode", "sample")
        assert invoke(*args).output == invoke(*args).output

    def test_lists_k_pairs(self, pipeline_dir):
        res = invoke("pairs", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv",
                     "--seed", 7, "--sizes", SIZES, "--k", 3)
        assert res.exit_code == 0
        assert len(res.output.strip().splitlines()) == 3


class TestAutoAnnotate:
    def test_store_written(self, pipeline_dir):
        store = pipeline_dir / "run" / "models.jsonl"
        assert store.exists()
        records = [json.loads(line) for line in store.read_text().splitlines()]
        assert len(records) >= 1
        assert all(r["v"] == 1 for r in records)
        assert all(r["seed"] == 7 for r in records)

    def test_reannotation_is_deterministic(self, pipeline_dir, tmp_path):
        res = invoke("auto-annotate", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7,
                     "--sizes", SIZES, "--pairs", 10, "--run-dir", tmp_path / "again")
        assert res.exit_code == 0
        assert ((tmp_path / "again" / "models.jsonl").read_text()
                == (pipeline_dir / "run" / "models.jsonl").read_text())


class TestFeaturize:
    def test_writes_matrix(self, pipeline_dir, tmp_path):
        out = tmp_path / "feat.csv"
        res = invoke("featurize", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7,
                     "--sizes", SIZES, "--run-dir", pipeline_dir / "run",
                     "--rows", "test", "--out", out)
        assert res.exit_code == 0, res.output
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# dataset_hash=")
        assert lines[1].startswith("sample_id,")
        assert lines[1].endswith(",label")
        assert len(lines) == 2 + 120  # provenance + header + learner-test rows

    def test_mismatched_dataset_rejected(self, pipeline_dir, tmp_path):
        res = invoke("synth", "--dims", 5, "--informative", 5, "--per-class", 200,
                     "--spread", "0.3", "--seed", 8, "--out", tmp_path / "other.csv")
        assert res.exit_code == 0
        res = invoke("featurize", "--csv", tmp_path / "other.csv",
                     "--schema", tmp_path / "other.schema.csv", "--seed", 8,
                     "--sizes", SIZES, "--run-dir", pipeline_dir / "run")
        assert res.exit_code != 0
        assert "was built on dataset" in res.output


class TestTrain:
    def test_baseline_model_on_features(self, pipeline_dir):
        res = invoke("train", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7,
                     "--sizes", SIZES, "--run-dir", pipeline_dir / "run",
                     "--arm", "features", "--model", "perceptron")
        assert res.exit_code == 0, res.output
        payload = json.loads(
            (pipeline_dir / "run" / "train_features_perceptron.json").read_text()
        )
        assert 0.0 <= payload["test_accuracy"] <= 1.0


class TestCompareAndReport:
    def test_compare_then_report(self, pipeline_dir):
        res = invoke("compare", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7,
                     "--sizes", SIZES, "--run-dir", pipeline_dir / "run",
                     "--grid", "reduced", "--folds", 3)
        assert res.exit_code == 0, res.output
        for name in ("report.json", "report.csv", "report.txt", "splits.json"):
            assert (pipeline_dir / "run" / name).exists()
        header = (pipeline_dir / "run" / "report.csv").read_text().splitlines()[0]
        assert header == "dataset,train,test,dims_used,data_acc,models,feature_acc"

        rendered = invoke("report", "--run-dir", pipeline_dir / "run")
        assert rendered.exit_code == 0
        assert rendered.output.splitlines()[0].split() == [
            "dataset", "train", "test", "dims_used", "data_acc", "models",
            "feature_acc",
        ]

    def test_compare_without_models_fails(self, pipeline_dir, tmp_path):
        res = invoke("compare", "--csv", pipeline_dir / "data.csv",
                     "--schema", pipeline_dir / "data.schema.csv", "--seed", 7,
                     "--sizes", SIZES, "--run-dir", tmp_path / "empty")
        assert res.exit_code != 0
        assert "no accepted models" in res.output
