"""Head-to-head comparison: raw worker-used dimensions vs region features.

Both arms tune independently on the learner-train rows, refit with their
chosen parameters, and are scored once on the held-out learner-test rows.
The raw arm only sees the dimensions that appear in some accepted model,
so neither arm gets information the annotation stage did not surface.
"""

import csv
import io
import json
from dataclasses import dataclass

from .boosting import GradientBoostedClassifier, evaluate_accuracy
from .data import Dataset, SplitSet
from .features import transform_rows, used_dimensions
from .model_selection import grid_search_cv
from .util import derive_seed

REPORT_COLUMNS = (
    "dataset",
    "train",
    "test",
    "dims_used",
    "data_acc",
    "models",
    "feature_acc",
)


@dataclass(frozen=True)
class ArmResult:
    chosen_params: dict
    cv_mean_accuracy: float
    test_accuracy: float
    cv_points: tuple  # of (params, mean accuracy)
    train_loss_curve: tuple  # training logistic loss per round of the final fit


@dataclass(frozen=True)
class ComparisonReport:
    dataset: str
    dataset_hash: str
    seed: int
    mode: str
    n_folds: int
    train_samples: int
    test_samples: int
    dims_used: int
    model_count: int
    raw_arm: ArmResult
    feature_arm: ArmResult

    def row(self) -> dict:
        return {
            "dataset": self.dataset,
            "train": self.train_samples,
            "test": self.test_samples,
            "dims_used": self.dims_used,
            "data_acc": self.raw_arm.test_accuracy,
            "models": self.model_count,
            "feature_acc": self.feature_arm.test_accuracy,
        }


def _run_arm(X_train, y_train, X_test, y_test, grid, seed, n_folds, n_jobs) -> ArmResult:
    report = grid_search_cv(
        X_train, y_train, grid=grid, n_folds=n_folds, seed=seed, n_jobs=n_jobs
    )
    clf = GradientBoostedClassifier(**report.best_params, random_state=seed)
    clf.fit(X_train, y_train)
    return ArmResult(
        chosen_params=dict(report.best_params),
        cv_mean_accuracy=report.best_mean_accuracy(),
        test_accuracy=evaluate_accuracy(clf, X_test, y_test),
        cv_points=tuple(
            (dict(pt.params), pt.mean_accuracy) for pt in report.points
        ),
        train_loss_curve=tuple(float(x) for x in clf.train_loss_curve_),
    )


def run_comparison(
    ds: Dataset,
    split: SplitSet,
    models,
    mode: str = "literal",
    grid: list = None,
    seed: int = 0,
    n_folds: int = 5,
    n_jobs: int = 1,
) -> ComparisonReport:
    models = tuple(models)
    if not models:
        raise ValueError("need at least one accepted model to compare")
    dims = used_dimensions(models)
    y_train = ds.labels[split.learner_train]
    y_test = ds.labels[split.learner_test]

    raw_train = ds.rows[split.learner_train][:, dims]
    raw_test = ds.rows[split.learner_test][:, dims]
    feat_train = transform_rows(ds.rows[split.learner_train], models, mode)
    feat_test = transform_rows(ds.rows[split.learner_test], models, mode)

    raw_arm = _run_arm(
        raw_train, y_train, raw_test, y_test,
        grid, derive_seed(seed, "raw-arm"), n_folds, n_jobs,
    )
    feature_arm = _run_arm(
        feat_train, y_train, feat_test, y_test,
        grid, derive_seed(seed, "feature-arm"), n_folds, n_jobs,
    )
    return ComparisonReport(
        dataset=ds.name,
        dataset_hash=ds.content_hash(),
        seed=seed,
        mode=mode,
        n_folds=n_folds,
        train_samples=int(split.learner_train.size),
        test_samples=int(split.learner_test.size),
        dims_used=len(dims),
        model_count=len(models),
        raw_arm=raw_arm,
        feature_arm=feature_arm,
    )


def report_text(report: ComparisonReport) -> str:
    """Aligned table: sample counts, dimension/model counts, both accuracies."""
    row = report.row()
    cells = [
        (c, f"{row[c]:.3f}" if isinstance(row[c], float) else str(row[c]))
        for c in REPORT_COLUMNS
    ]
    widths = [max(len(h), len(v)) for h, v in cells]
    header = "  ".join(h.ljust(w) for (h, _), w in zip(cells, widths))
    body = "  ".join(v.ljust(w) for (_, v), w in zip(cells, widths))
    return header.rstrip() + "\n" + body.rstrip() + "\n"


def report_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(REPORT_COLUMNS)
    row = report.row()
    writer.writerow(
        [f"{row[c]:.6f}" if isinstance(row[c], float) else row[c]
         for c in REPORT_COLUMNS]
    )
    return buf.getvalue()


def report_json(report: ComparisonReport) -> str:
    def arm(a: ArmResult) -> dict:
        return {
            "chosen_params": a.chosen_params,
            "cv_mean_accuracy": a.cv_mean_accuracy,
            "test_accuracy": a.test_accuracy,
            "cv_points": [
                {"params": p, "mean_accuracy": m} for p, m in a.cv_points
            ],
            "train_loss_curve": list(a.train_loss_curve),
        }

    payload = {
        "dataset": report.dataset,
        "dataset_hash": report.dataset_hash,
        "seed": report.seed,
        "mode": report.mode,
        "n_folds": report.n_folds,
        "row": report.row(),
        "raw_arm": arm(report.raw_arm),
        "feature_arm": arm(report.feature_arm),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
