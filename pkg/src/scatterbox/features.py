"""Turn accepted rectangle models into a feature matrix.

Each accepted model contributes one column: its test-split accuracy where
the sample falls inside the model's regions, 0 elsewhere. The printed
("literal") encoding is class-blind; the "signed" variant flips the sign
for regions predicting label 0. Both are exposed because either reading of
the transform is defensible; literal is the default.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .data import Dataset
from .regions import RectangleModel

MODES = ("literal", "signed")


def _check_models(models) -> tuple:
    models = tuple(models)
    if not models:
        raise ValueError("need at least one accepted model")
    for m in models:
        if m.test_accuracy is None:
            raise ValueError(f"model {m.model_id} has no test accuracy; run the "
                             "acceptance gate first")
    return models


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _model_column(rows: np.ndarray, model: RectangleModel, mode: str) -> np.ndarray:
    u, v = model.stats.apply(rows[:, model.pair.dim_a], rows[:, model.pair.dim_b])
    assigned = np.full(rows.shape[0], -1, dtype=np.int64)
    for pos in sorted(range(len(model.rectangles)),
                      key=lambda i: model.rectangles[i].draw_order):
        mask = (assigned == -1) & model.rectangles[pos].contains(u, v)
        assigned[mask] = pos
    column = np.zeros(rows.shape[0], dtype=np.float64)
    covered = assigned >= 0
    if mode == "literal":
        column[covered] = model.test_accuracy
    else:
        signs = np.array(
            [1.0 if model.rectangles[p].predicted_label == 1 else -1.0
             for p in assigned[covered]]
        )
        column[covered] = signs * model.test_accuracy
    return column


def feature_value(sample_row, model: RectangleModel, mode: str = "literal") -> float:
    """Feature of one sample under one model.

    literal: the model's test accuracy if any rectangle contains the
    sample, else 0. signed: the same magnitude, negated when the claiming
    rectangle predicts label 0.
    """
    _check_models([model])
    _check_mode(mode)
    rows = np.asarray(sample_row, dtype=np.float64).reshape(1, -1)
    return float(_model_column(rows, model, mode)[0])


def transform_rows(rows, models, mode: str = "literal") -> np.ndarray:
    """(n, D) raw rows -> (n, N) feature values, one column per model."""
    models = _check_models(models)
    _check_mode(mode)
    rows = np.asarray(rows, dtype=np.float64)
    return np.column_stack([_model_column(rows, m, mode) for m in models])


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    model_ids: tuple
    sample_indices: tuple
    labels: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.sample_indices), len(self.model_ids)):
            raise ValueError("feature matrix shape mismatch")


def build_feature_matrix(ds: Dataset, indices, models, mode: str = "literal") -> FeatureMatrix:
    indices = np.asarray(indices, dtype=np.int64)
    models = _check_models(models)
    values = transform_rows(ds.rows[indices], models, mode)
    return FeatureMatrix(
        values=values,
        model_ids=tuple(m.model_id for m in models),
        sample_indices=tuple(int(i) for i in indices),
        labels=ds.labels[indices].copy(),
    )


def used_dimensions(models) -> tuple:
    """Sorted union of every dimension appearing in any model's pair."""
    models = tuple(models)
    if not models:
        raise ValueError("need at least one model")
    dims = set()
    for m in models:
        dims.add(m.pair.dim_a)
        dims.add(m.pair.dim_b)
    return tuple(sorted(dims))


def write_feature_csv(matrix: FeatureMatrix, path, dataset_hash: str, seed: int) -> None:
    """Persist as CSV: sample id, one column per model id, label last.

    A leading comment line pins the dataset hash and seed the matrix was
    built from.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# dataset_hash={dataset_hash} seed={seed}\n")
        writer = csv.writer(fh)
        writer.writerow(["sample_id", *matrix.model_ids, "label"])
        for i, idx in enumerate(matrix.sample_indices):
            writer.writerow([idx, *[repr(float(x)) for x in matrix.values[i]],
                             int(matrix.labels[i])])


def read_feature_csv(path) -> tuple:
    """Read back a feature CSV; returns (FeatureMatrix, dataset_hash, seed)."""
    path = Path(path)
    with path.open(newline="") as fh:
        first = fh.readline().strip()
        if not first.startswith("# dataset_hash="):
            raise ValueError(f"{path} is missing its provenance line")
        parts = dict(p.split("=", 1) for p in first[2:].split())
        reader = csv.reader(fh)
        header = next(reader)
        if header[0] != "sample_id" or header[-1] != "label":
            raise ValueError(f"{path} has an unexpected header")
        model_ids = tuple(header[1:-1])
        sample_indices, rows, labels = [], [], []
        for row in reader:
            sample_indices.append(int(row[0]))
            rows.append([float(x) for x in row[1:-1]])
            labels.append(int(row[-1]))
    matrix = FeatureMatrix(
        values=np.array(rows, dtype=np.float64).reshape(len(rows), len(model_ids)),
        model_ids=model_ids,
        sample_indices=tuple(sample_indices),
        labels=np.array(labels, dtype=np.int64),
    )
    return matrix, parts["dataset_hash"], int(parts["seed"])


class RegionFeatureTransformer(TransformerMixin, BaseEstimator):
    """Sklearn-style wrapper around the model-column transform.

    Models are fixed at construction (they come from annotation, not from
    fitting), so fit only validates input shape.
    """

    def __init__(self, models=(), mode: str = "literal"):
        self.models = models
        self.mode = mode

    def fit(self, X, y=None):
        _check_models(self.models)
        _check_mode(self.mode)
        X = check_array(X)
        needed = 1 + max(max(m.pair.dim_a, m.pair.dim_b) for m in self.models)
        if X.shape[1] < needed:
            raise ValueError(
                f"X has {X.shape[1]} columns but the models reference "
                f"dimension {needed - 1}"
            )
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, transformer was fitted with "
                f"{self.n_features_in_}"
            )
        return transform_rows(X, self.models, self.mode)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_in_")
        return np.asarray([m.model_id for m in self.models], dtype=object)
