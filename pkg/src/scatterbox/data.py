"""Tabular datasets: CSV ingestion, synthesis, balancing, splitting, pair normalization.

Every randomized operation here is a pure function of its inputs and an
integer seed; datasets and splits are immutable once built.
"""

import csv
import enum
import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Malformed input data or schema."""


class ZeroVarianceError(ValueError):
    """A dimension is constant on the rows it would be normalized with."""


class ColumnKind(enum.Enum):
    NOMINAL = "nominal"
    INTEGER = "integer"
    CONTINUOUS = "continuous"

    @classmethod
    def parse(cls, text: str) -> "ColumnKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DatasetError(
                f"unknown column kind {text!r}; expected one of "
                f"{', '.join(k.value for k in cls)}"
            ) from None


@dataclass(frozen=True)
class Dataset:
    """Labeled binary-classification table.

    rows holds all feature values as float64; nominal columns are
    integer-coded in first-appearance order. labels are 0/1.
    """

    name: str
    columns: tuple  # of (name, ColumnKind)
    rows: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        rows = np.ascontiguousarray(self.rows, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if rows.ndim != 2:
            raise DatasetError("rows must be a 2-D array")
        if rows.shape[1] != len(self.columns):
            raise DatasetError(
                f"{rows.shape[1]} value columns but {len(self.columns)} declared"
            )
        if rows.shape[1] < 2:
            raise DatasetError("a dataset needs at least 2 dimensions")
        if labels.shape != (rows.shape[0],):
            raise DatasetError("labels length must equal row count")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise DatasetError("labels must be 0 or 1")
        rows.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def n_samples(self) -> int:
        return self.rows.shape[0]

    @property
    def n_dims(self) -> int:
        return self.rows.shape[1]

    def column_names(self) -> list:
        return [name for name, _ in self.columns]

    def label_counts(self) -> tuple:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

    def content_hash(self) -> str:
        """Hex digest of the column schema and all cell/label values."""
        h = hashlib.sha256()
        for name, kind in self.columns:
            h.update(f"{name}:{kind.value};".encode("utf-8"))
        h.update(self.rows.tobytes())
        h.update(self.labels.tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class SplitSet:
    """Five pairwise-disjoint index lists over one dataset.

    The three annotation splits feed the drawing/gating/scoring stages; the
    learner splits feed classifier training and the final held-out
    evaluation. Annotation rows are never drawn from learner_test, so
    drawn models cannot leak the held-out evaluation rows.
    """

    annotation_train: np.ndarray
    annotation_valid: np.ndarray
    annotation_test: np.ndarray
    learner_train: np.ndarray
    learner_test: np.ndarray

    def __post_init__(self):
        seen = set()
        for field in self._fields():
            arr = np.ascontiguousarray(getattr(self, field), dtype=np.int64)
            if arr.ndim != 1 or arr.size == 0:
                raise DatasetError(f"split {field} must be a non-empty 1-D index list")
            if (arr < 0).any():
                raise DatasetError(f"split {field} contains negative indices")
            part = set(arr.tolist())
            if len(part) != arr.size or part & seen:
                raise DatasetError("split index lists must be pairwise disjoint")
            seen |= part
            arr.setflags(write=False)
            object.__setattr__(self, field, arr)

    @staticmethod
    def _fields() -> tuple:
        return (
            "annotation_train",
            "annotation_valid",
            "annotation_test",
            "learner_train",
            "learner_test",
        )

    def all_indices(self) -> np.ndarray:
        return np.concatenate([getattr(self, f) for f in self._fields()])


@dataclass(frozen=True)
class NormStats:
    """Per-dimension affine normalization fitted on annotation-train rows.

    Population standard deviation is used, so z-scoring the fitting rows
    yields mean 0 and stddev 1 exactly (up to float error).
    """

    mean_a: float
    std_a: float
    mean_b: float
    std_b: float

    def __post_init__(self):
        if not (self.std_a > 0 and self.std_b > 0):
            raise ZeroVarianceError("normalization stddev must be positive")

    def apply(self, a_values, b_values) -> tuple:
        """Map raw coordinate arrays to z-scores."""
        u = (np.asarray(a_values, dtype=np.float64) - self.mean_a) / self.std_a
        v = (np.asarray(b_values, dtype=np.float64) - self.mean_b) / self.std_b
        return u, v


def load_schema(path) -> list:
    """Read a sidecar schema file of `column_name,kind` lines.

    Blank lines and lines starting with '#' are ignored.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"schema file not found: {path}")
    schema = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not parts[0]:
            raise DatasetError(f"{path}:{lineno}: expected `column_name,kind`")
        schema.append((parts[0], ColumnKind.parse(parts[1])))
    if not schema:
        raise DatasetError(f"schema file {path} declares no columns")
    return schema


def save_schema(path, schema) -> None:
    lines = [f"{name},{kind.value}" for name, kind in schema]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_cell(text: str, kind: ColumnKind, column: str, lineno: int) -> float:
    text = text.strip()
    if kind is ColumnKind.INTEGER:
        try:
            return float(int(text))
        except ValueError:
            raise DatasetError(
                f"line {lineno}: integer column {column!r} holds {text!r}"
            ) from None
    try:
        return float(text)
    except ValueError:
        raise DatasetError(
            f"line {lineno}: continuous column {column!r} holds {text!r}"
        ) from None


def load_csv(path, schema, label_column: str) -> Dataset:
    """Load a comma-separated file against a declared schema.

    The header row must match the schema names exactly. The label column
    must hold exactly two distinct raw values; the lexicographically
    smaller one maps to 0. Nominal columns are integer-coded in
    first-appearance order.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    schema = [(name, kind) for name, kind in schema]
    names = [name for name, _ in schema]
    if label_column not in names:
        raise DatasetError(f"label column {label_column!r} not in schema")

    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        if header != names:
            raise DatasetError(
                f"header mismatch: file has {header}, schema declares {names}"
            )
        label_pos = names.index(label_column)
        feature_schema = [(i, n, k) for i, (n, k) in enumerate(schema) if i != label_pos]
        nominal_codes = {i: {} for i, _, k in feature_schema if k is ColumnKind.NOMINAL}

        data_rows: list = []
        raw_labels: list = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(names):
                raise DatasetError(
                    f"line {lineno}: expected {len(names)} fields, got {len(row)}"
                )
            values = []
            for i, column, kind in feature_schema:
                cell = row[i].strip()
                if kind is ColumnKind.NOMINAL:
                    codes = nominal_codes[i]
                    if cell not in codes:
                        codes[cell] = len(codes)
                    values.append(float(codes[cell]))
                else:
                    values.append(_parse_cell(cell, kind, column, lineno))
            data_rows.append(values)
            raw_labels.append(row[label_pos].strip())

    if not data_rows:
        raise DatasetError(f"{path} has a header but no data rows")
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DatasetError(
            f"label column must hold exactly 2 distinct values, found {len(distinct)}"
        )
    mapping = {distinct[0]: 0, distinct[1]: 1}
    labels = np.array([mapping[v] for v in raw_labels], dtype=np.int64)
    columns = tuple((n, k) for n, k in schema if n != label_column)
    return Dataset(
        name=path.stem,
        columns=columns,
        rows=np.array(data_rows, dtype=np.float64),
        labels=labels,
    )


def save_csv(ds: Dataset, path, label_column: str = "label") -> None:
    """Write a dataset (with its labels) back out as CSV.

    Floats use shortest round-trip repr, so load_csv(save_csv(ds))
    reproduces rows bit-exactly.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ds.column_names() + [label_column])
        for row, label in zip(ds.rows, ds.labels):
            writer.writerow([_format_value(x, k) for x, (_, k) in zip(row, ds.columns)]
                            + [int(label)])


def _format_value(x: float, kind: ColumnKind) -> str:
    if kind in (ColumnKind.INTEGER, ColumnKind.NOMINAL):
        return str(int(x))
    return repr(float(x))


def balance_classes(ds: Dataset, seed: int) -> Dataset:
    """Downsample the majority label to the minority count, then shuffle.

    Sampling is uniform without replacement; both steps are driven by
    `seed` only.
    """
    n0, n1 = ds.label_counts()
    if n0 == 0 or n1 == 0:
        raise DatasetError("both labels must be present to balance")
    rng = np.random.default_rng(seed)
    idx0 = np.flatnonzero(ds.labels == 0)
    idx1 = np.flatnonzero(ds.labels == 1)
    target = min(n0, n1)
    keep0 = rng.choice(idx0, size=target, replace=False) if n0 > target else idx0
    keep1 = rng.choice(idx1, size=target, replace=False) if n1 > target else idx1
    kept = np.concatenate([keep0, keep1])
    kept = kept[rng.permutation(kept.size)]
    return Dataset(
        name=ds.name,
        columns=ds.columns,
        rows=ds.rows[kept],
        labels=ds.labels[kept],
    )


@dataclass(frozen=True)
class SplitSizes:
    """Requested sizes for make_splits.

    train_pool is the non-holdout side; the three annotation splits are
    carved out of it and the remainder becomes learner_train. Everything
    outside the pool is learner_test.
    """

    annotation_train: int = 100
    annotation_valid: int = 100
    annotation_test: int = 200
    train_pool: int = 0

    def annotation_total(self) -> int:
        return self.annotation_train + self.annotation_valid + self.annotation_test

    def validate(self, n_samples: int) -> None:
        for field in ("annotation_train", "annotation_valid", "annotation_test",
                      "train_pool"):
            if getattr(self, field) < 1:
                raise DatasetError(f"split size {field} must be >= 1")
        if self.annotation_total() > self.train_pool:
            raise DatasetError(
                "annotation splits must fit inside the training pool: "
                f"{self.annotation_total()} > {self.train_pool}"
            )
        if self.train_pool >= n_samples:
            raise DatasetError(
                f"train_pool {self.train_pool} leaves no held-out rows "
                f"(dataset has {n_samples})"
            )

    @classmethod
    def defaults_for(cls, n_samples: int) -> "SplitSizes":
        return cls(100, 100, 200, int(0.7 * n_samples))


def make_splits(ds: Dataset, sizes: SplitSizes, seed: int) -> SplitSet:
    """Stratified five-way split, deterministic under `seed`.

    Each split's label counts differ by at most 1; odd-sized splits give
    the extra row to whichever label has more rows still unassigned.
    """
    sizes.validate(ds.n_samples)
    rng = np.random.default_rng(seed)
    remaining = [
        list(rng.permutation(np.flatnonzero(ds.labels == 0))),
        list(rng.permutation(np.flatnonzero(ds.labels == 1))),
    ]

    def take(count: int, what: str) -> np.ndarray:
        half = count // 2
        want = [half, half]
        if count % 2 == 1:
            # extra row to the larger remaining stratum keeps later splits near 50/50
            want[0 if len(remaining[0]) > len(remaining[1]) else 1] += 1
        if want[0] > len(remaining[0]) or want[1] > len(remaining[1]):
            raise DatasetError(
                f"stratum too small for split {what!r}: need {want}, have "
                f"{[len(r) for r in remaining]}"
            )
        picked = remaining[0][:want[0]] + remaining[1][:want[1]]
        remaining[0] = remaining[0][want[0]:]
        remaining[1] = remaining[1][want[1]:]
        return np.sort(np.array(picked, dtype=np.int64))

    a_train = take(sizes.annotation_train, "annotation_train")
    a_valid = take(sizes.annotation_valid, "annotation_valid")
    a_test = take(sizes.annotation_test, "annotation_test")
    l_train = take(sizes.train_pool - sizes.annotation_total(), "learner_train")
    l_test = take(ds.n_samples - sizes.train_pool, "learner_test")
    return SplitSet(a_train, a_valid, a_test, l_train, l_test)


def synth_clusters(
    d_total: int,
    d_informative: int,
    n_per_class: int,
    cluster_spread: float,
    seed: int,
) -> Dataset:
    """Two Gaussian clusters at mirrored centers on the informative dimensions.

    Class 0 centers at +1 and class 1 at -1 on every informative dimension,
    so any informative pair shows two clusters on a scatterplot. The other
    dimensions are label-independent standard normal noise. Output is
    balanced by construction (n_per_class rows per label).
    """
    if not 2 <= d_informative <= d_total:
        raise DatasetError("need 2 <= d_informative <= d_total")
    if n_per_class < 1:
        raise DatasetError("n_per_class must be >= 1")
    if cluster_spread < 0:
        raise DatasetError("cluster_spread must be >= 0")
    rng = np.random.default_rng(seed)
    m = 2 * n_per_class
    labels = np.repeat(np.array([0, 1], dtype=np.int64), n_per_class)
    centers = np.where(labels[:, None] == 0, 1.0, -1.0)  # (m, 1) broadcast below
    rows = rng.standard_normal((m, d_total))
    rows[:, :d_informative] = centers + cluster_spread * rows[:, :d_informative]
    order = rng.permutation(m)
    columns = tuple((f"x{i}", ColumnKind.CONTINUOUS) for i in range(d_total))
    return Dataset(
        name="synth-clusters",
        columns=columns,
        rows=rows[order],
        labels=labels[order],
    )


def normalize_pair(ds: Dataset, split: SplitSet, pair) -> tuple:
    """Z-score the annotation-train rows of one dimension pair.

    Returns (uv, labels, stats) where uv is an (n, 2) array of z-scores,
    labels the matching 0/1 labels, and stats the fitted NormStats for
    applying the identical affine map to any other rows.
    """
    dim_a, dim_b = pair
    for d in (dim_a, dim_b):
        if not 0 <= d < ds.n_dims:
            raise DatasetError(f"dimension {d} out of range for D={ds.n_dims}")
    train = ds.rows[split.annotation_train]
    a = train[:, dim_a]
    b = train[:, dim_b]
    std_a = float(np.std(a))
    std_b = float(np.std(b))
    if std_a == 0.0 or std_b == 0.0:
        raise ZeroVarianceError(
            f"dimension pair ({dim_a}, {dim_b}) has zero variance on the "
            "annotation-train rows"
        )
    stats = NormStats(float(np.mean(a)), std_a, float(np.mean(b)), std_b)
    u, v = stats.apply(a, b)
    return np.column_stack([u, v]), ds.labels[split.annotation_train].copy(), stats
