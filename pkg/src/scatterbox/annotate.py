"""Synthetic annotator: draws rectangle models the way a careful worker would.

Candidate rectangles live on a lattice over the annotation-train bounding
box. Each candidate is labeled by the majority label of the train points
it contains; the greedy loop repeatedly adds the candidate that claims the
best net balance of correct minus incorrect among still-uncovered points,
mirroring greedy set covering. Coverage bookkeeping uses 2-D prefix sums,
so each step is a constant number of array lookups per candidate.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset, SplitSet, ZeroVarianceError, normalize_pair
from .regions import Rectangle, RectangleModel, score_model
from .util import short_digest


@dataclass(frozen=True)
class AnnotatorBudget:
    """Caps for one drawing session.

    target_accuracy is the validation accuracy at which the annotator
    stops adding rectangles, like a worker watching the progress bar.
    """

    max_rectangles: int = 8
    grid_resolution: int = 16
    target_accuracy: float = 0.7

    def __post_init__(self):
        if self.max_rectangles < 1 or self.grid_resolution < 1:
            raise ValueError("budget counts must be positive")
        if not 0.5 < self.target_accuracy <= 1.0:
            raise ValueError("target_accuracy must be in (0.5, 1]")


def _prefix_sum(hist: np.ndarray) -> np.ndarray:
    padded = np.zeros((hist.shape[0] + 1, hist.shape[1] + 1))
    padded[1:, 1:] = np.cumsum(np.cumsum(hist, axis=0), axis=1)
    return padded


def _box_counts(prefix, i0, i1, j0, j1) -> np.ndarray:
    return prefix[i1, j1] - prefix[i0, j1] - prefix[i1, j0] + prefix[i0, j0]


def propose_model(
    ds: Dataset,
    split: SplitSet,
    pair,
    budget: AnnotatorBudget = AnnotatorBudget(),
    seed: int = 0,
) -> RectangleModel:
    """Greedy rectangle drawing on one dimension pair.

    Deterministic given (inputs, seed): the seed only breaks ties between
    equally good candidates, which is what makes repeated sessions on the
    same pair behave like different workers. The returned model is
    unscored; acceptance gating and test scoring stay with the caller.
    """
    uv, labels, stats = normalize_pair(ds, split, pair)
    res = budget.grid_resolution
    u_lo, v_lo = uv.min(axis=0)
    u_hi, v_hi = uv.max(axis=0)
    if u_lo == u_hi or v_lo == v_hi:
        raise ZeroVarianceError(
            f"pair {tuple(pair)} collapses to a point after normalization"
        )
    lines_u = np.linspace(u_lo, u_hi, res + 1)
    lines_v = np.linspace(v_lo, v_hi, res + 1)
    cell_u = np.clip(np.searchsorted(lines_u, uv[:, 0], side="right") - 1, 0, res - 1)
    cell_v = np.clip(np.searchsorted(lines_v, uv[:, 1], side="right") - 1, 0, res - 1)

    # candidate rectangles: all boundary-line pairs, coarsened for big lattices
    stride = max(1, res // 16)
    bounds = sorted(set(range(0, res + 1, stride)) | {res})
    lo_idx, hi_idx = [], []
    for i, b0 in enumerate(bounds):
        for b1 in bounds[i + 1:]:
            lo_idx.append(b0)
            hi_idx.append(b1)
    lo_idx = np.array(lo_idx)
    hi_idx = np.array(hi_idx)
    i0 = np.repeat(lo_idx, lo_idx.size)
    i1 = np.repeat(hi_idx, lo_idx.size)
    j0 = np.tile(lo_idx, lo_idx.size)
    j1 = np.tile(hi_idx, lo_idx.size)

    def label_histograms(mask) -> tuple:
        h0 = np.zeros((res, res))
        h1 = np.zeros((res, res))
        sel0 = mask & (labels == 0)
        sel1 = mask & (labels == 1)
        np.add.at(h0, (cell_u[sel0], cell_v[sel0]), 1.0)
        np.add.at(h1, (cell_u[sel1], cell_v[sel1]), 1.0)
        return _prefix_sum(h0), _prefix_sum(h1)

    all_points = np.ones(labels.size, dtype=bool)
    full0, full1 = label_histograms(all_points)
    cand_labels = (
        _box_counts(full1, i0, i1, j0, j1) > _box_counts(full0, i0, i1, j0, j1)
    ).astype(np.int64)

    rng = np.random.default_rng(seed)
    covered = np.zeros(labels.size, dtype=bool)
    rectangles = []
    for step in range(budget.max_rectangles):
        open0, open1 = label_histograms(~covered)
        claim0 = _box_counts(open0, i0, i1, j0, j1)
        claim1 = _box_counts(open1, i0, i1, j0, j1)
        gains = np.where(cand_labels == 1, claim1 - claim0, claim0 - claim1)
        best = gains.max()
        if best <= 0:
            break
        tied = np.flatnonzero(gains == best)
        pick = int(tied[rng.integers(tied.size)])
        rect = Rectangle(
            u_min=float(lines_u[i0[pick]]),
            u_max=float(lines_u[i1[pick]]),
            v_min=float(lines_v[j0[pick]]),
            v_max=float(lines_v[j1[pick]]),
            predicted_label=int(cand_labels[pick]),
            draw_order=step,
        )
        # lattice counts bin half-open cells; confirm the closed-boundary
        # geometry really improves the train balance before keeping the box
        claim = ~covered & np.asarray(rect.contains(uv[:, 0], uv[:, 1]))
        true_gain = int(
            np.sum(labels[claim] == rect.predicted_label)
            - np.sum(labels[claim] != rect.predicted_label)
        )
        if true_gain <= 0:
            break
        covered |= claim
        rectangles.append(rect)

        interim = RectangleModel(
            model_id="draft",
            pair=pair,
            stats=stats,
            rectangles=tuple(rectangles),
            provenance="synthetic",
        )
        acc, n_cov, _ = score_model(interim, ds, split.annotation_valid)
        if n_cov > 0 and acc >= budget.target_accuracy:
            break

    if not rectangles:
        # cannot happen: a one-cell box around any single point has gain 1
        raise RuntimeError("greedy produced no rectangle")
    dim_a, dim_b = pair
    token = short_digest(
        f"{ds.content_hash()}|{dim_a},{dim_b}|{seed}|{budget.max_rectangles}"
        f"|{budget.grid_resolution}|{budget.target_accuracy}"
    )
    return RectangleModel(
        model_id=f"syn-{token}",
        pair=pair,
        stats=stats,
        rectangles=tuple(rectangles),
        provenance="synthetic",
    )
