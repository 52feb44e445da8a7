"""Cross-validated grid search for the boosted-tree classifier.

Every grid point is evaluated on the identical stratified folds. Ties on
mean accuracy resolve toward the cheaper model: fewer rounds, then smaller
depth, then smaller learning rate. Fold/point evaluations may run on a
thread pool; results land in preassigned slots, so the outcome is
bit-identical to a sequential run.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np
from sklearn.model_selection import StratifiedKFold

from .boosting import GradientBoostedClassifier, evaluate_accuracy

FULL_LEARNING_RATES = (0.01, 0.05, 0.1, 0.3)
FULL_MAX_DEPTHS = (2, 5, 10, 15)
FULL_ROUNDS = (50, 100, 200, 400, 800)

REDUCED_LEARNING_RATES = (0.1, 0.3)
REDUCED_MAX_DEPTHS = (2, 5)
REDUCED_ROUNDS = (50, 100)


def _expand(rates, depths, rounds) -> list:
    return [
        {"learning_rate": lr, "max_depth": d, "n_rounds": r}
        for lr, d, r in product(rates, depths, rounds)
    ]


def default_param_grid() -> list:
    """The full 4 x 4 x 5 tuning grid (80 points)."""
    return _expand(FULL_LEARNING_RATES, FULL_MAX_DEPTHS, FULL_ROUNDS)


def reduced_param_grid() -> list:
    """A 2 x 2 x 2 grid for quick end-to-end runs."""
    return _expand(REDUCED_LEARNING_RATES, REDUCED_MAX_DEPTHS, REDUCED_ROUNDS)


@dataclass(frozen=True)
class GridPoint:
    params: dict
    fold_accuracies: tuple
    mean_accuracy: float


@dataclass(frozen=True)
class CvReport:
    points: tuple
    best_params: dict
    n_folds: int
    seed: int

    def best_mean_accuracy(self) -> float:
        for pt in self.points:
            if pt.params == self.best_params:
                return pt.mean_accuracy
        raise ValueError("best_params missing from grid points")


def _tie_break_key(point: GridPoint) -> tuple:
    p = point.params
    return (-point.mean_accuracy, p["n_rounds"], p["max_depth"], p["learning_rate"])


def grid_search_cv(
    X,
    y,
    grid: list = None,
    n_folds: int = 5,
    seed: int = 0,
    n_jobs: int = 1,
    estimator_factory=GradientBoostedClassifier,
) -> CvReport:
    """Evaluate every grid point with stratified k-fold accuracy."""
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    grid = default_param_grid() if grid is None else list(grid)
    if not grid:
        raise ValueError("parameter grid is empty")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    _, counts = np.unique(y, return_counts=True)
    if counts.min() < n_folds:
        raise ValueError(
            f"smallest class has {counts.min()} rows; every one of the "
            f"{n_folds} folds would need at least one"
        )
    splitter = StratifiedKFold(n_splits=n_folds, shuffle=True, random_state=seed)
    folds = list(splitter.split(X, y))

    def run_cell(point_idx: int, fold_idx: int) -> float:
        train_idx, valid_idx = folds[fold_idx]
        clf = estimator_factory(**grid[point_idx], random_state=seed)
        clf.fit(X[train_idx], y[train_idx])
        return evaluate_accuracy(clf, X[valid_idx], y[valid_idx])

    accs = np.zeros((len(grid), n_folds))
    cells = [(pi, fi) for pi in range(len(grid)) for fi in range(n_folds)]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            for (pi, fi), acc in zip(cells, pool.map(lambda c: run_cell(*c), cells)):
                accs[pi, fi] = acc
    else:
        for pi, fi in cells:
            accs[pi, fi] = run_cell(pi, fi)

    points = tuple(
        GridPoint(
            params=dict(grid[pi]),
            fold_accuracies=tuple(float(a) for a in accs[pi]),
            mean_accuracy=float(np.mean(accs[pi])),
        )
        for pi in range(len(grid))
    )
    best = min(points, key=_tie_break_key)
    return CvReport(points=points, best_params=dict(best.params),
                    n_folds=n_folds, seed=seed)
