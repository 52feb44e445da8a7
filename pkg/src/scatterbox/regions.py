"""Rectangle region models: containment, sample assignment, accuracy, gating.

A model is a worker's set of labeled axis-aligned rectangles on one
normalized dimension pair. Accuracy counts only samples that fall inside
some rectangle; when rectangles overlap, the earliest-drawn one claims the
sample, which keeps accuracy a true fraction.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset, NormStats, SplitSet
from .pairs import DimensionPair


class NoCoverageError(ValueError):
    """No sample fell inside any rectangle, so accuracy is undefined."""


@dataclass(frozen=True)
class Rectangle:
    """Closed axis-aligned box in normalized coordinates.

    Boundaries are inclusive on all four edges: workers drag edges onto
    points intentionally.
    """

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    predicted_label: int
    draw_order: int

    def __post_init__(self):
        if not self.u_min < self.u_max:
            raise ValueError(f"u_min must be strictly less than u_max, got "
                             f"[{self.u_min}, {self.u_max}]")
        if not self.v_min < self.v_max:
            raise ValueError(f"v_min must be strictly less than v_max, got "
                             f"[{self.v_min}, {self.v_max}]")
        if self.predicted_label not in (0, 1):
            raise ValueError("predicted_label must be 0 or 1")
        if self.draw_order < 0:
            raise ValueError("draw_order must be >= 0")

    def contains(self, u, v):
        """Closed-boundary containment; accepts scalars or arrays."""
        return (
            (np.asarray(u) >= self.u_min)
            & (np.asarray(u) <= self.u_max)
            & (np.asarray(v) >= self.v_min)
            & (np.asarray(v) <= self.v_max)
        )


def contains(rect: Rectangle, u: float, v: float) -> bool:
    return bool(rect.contains(u, v))


@dataclass
class RectangleModel:
    """One worker's rectangles on one dimension pair, plus its scores.

    Rectangles are stored in normalized coordinates together with the
    normalization stats, so the model applies unchanged to rows it never
    saw. validation_accuracy and test_accuracy start unset and are filled
    in by accept_model; after acceptance the model is treated as frozen.
    """

    model_id: str
    pair: DimensionPair
    stats: NormStats
    rectangles: tuple
    provenance: str = "synthetic"
    validation_accuracy: float = None
    test_accuracy: float = None

    def __post_init__(self):
        rects = tuple(self.rectangles)
        if not rects:
            raise ValueError("a model needs at least one rectangle")
        orders = [r.draw_order for r in rects]
        if len(set(orders)) != len(orders):
            raise ValueError("draw_order values must be unique within a model")
        self.rectangles = rects
        self.pair = DimensionPair(*self.pair)

    def normalized_coords(self, ds: Dataset, indices) -> tuple:
        rows = ds.rows[np.asarray(indices, dtype=np.int64)]
        return self.stats.apply(rows[:, self.pair.dim_a], rows[:, self.pair.dim_b])


def assign(model: RectangleModel, ds: Dataset, indices) -> np.ndarray:
    """Map each sample to the position of its claiming rectangle, or -1.

    The claiming rectangle is the containing one with the smallest
    draw_order.
    """
    u, v = model.normalized_coords(ds, indices)
    out = np.full(u.shape[0], -1, dtype=np.int64)
    by_priority = sorted(
        range(len(model.rectangles)), key=lambda i: model.rectangles[i].draw_order
    )
    for pos in by_priority:
        mask = (out == -1) & model.rectangles[pos].contains(u, v)
        out[mask] = pos
    return out


def score_model(model: RectangleModel, ds: Dataset, indices) -> tuple:
    """Return (accuracy or None, covered count, total count)."""
    indices = np.asarray(indices, dtype=np.int64)
    positions = assign(model, ds, indices)
    covered = positions >= 0
    n_covered = int(covered.sum())
    if n_covered == 0:
        return None, 0, int(indices.size)
    predicted = np.array(
        [model.rectangles[p].predicted_label for p in positions[covered]],
        dtype=np.int64,
    )
    correct = int(np.sum(predicted == ds.labels[indices[covered]]))
    return correct / n_covered, n_covered, int(indices.size)


def model_accuracy(model: RectangleModel, ds: Dataset, indices) -> float:
    """Fraction of covered samples whose label matches their rectangle.

    Samples outside every rectangle do not contribute. Raises
    NoCoverageError when nothing is covered, which is distinct from an
    accuracy of 0.0.
    """
    acc, n_covered, _ = score_model(model, ds, indices)
    if n_covered == 0:
        raise NoCoverageError(
            f"model {model.model_id} covers none of the {len(indices)} samples"
        )
    return acc


def accept_model(
    model: RectangleModel,
    ds: Dataset,
    split: SplitSet,
    threshold: float = 0.5,
    min_coverage: float = 0.0,
) -> bool:
    """Quality gate: validation accuracy strictly above threshold.

    A model covering no validation sample is rejected, not an error. On
    acceptance the model's test-split accuracy (its feature weight) is
    computed and stored; a model that covers no test sample cannot be used
    as a feature and is likewise rejected.
    """
    acc, covered, total = score_model(model, ds, split.annotation_valid)
    if covered == 0:
        return False
    model.validation_accuracy = acc
    if not (acc > threshold and covered / total >= min_coverage):
        return False
    test_acc, test_covered, _ = score_model(model, ds, split.annotation_test)
    if test_covered == 0:
        return False
    model.test_accuracy = test_acc
    return True
