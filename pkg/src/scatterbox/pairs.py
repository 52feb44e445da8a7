"""Dimension-pair ranking by absolute Pearson correlation.

Low-correlation pairs make cluster structure easiest to see on a
scatterplot, so they are what gets offered as annotation tasks.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .data import Dataset, DatasetError, SplitSet


class DimensionPair(NamedTuple):
    dim_a: int
    dim_b: int


@dataclass(frozen=True)
class CorrelationTable:
    """Pearson correlation for every unordered pair of usable dimensions.

    Usable means non-constant on the annotation-train rows; constant
    dimensions are excluded entirely.
    """

    entries: tuple  # of (DimensionPair, float), lexicographic pair order
    usable_dims: tuple

    def __len__(self) -> int:
        return len(self.entries)

    def rho(self, pair: DimensionPair) -> float:
        for p, r in self.entries:
            if p == pair:
                return r
        raise KeyError(pair)


def correlation_table(ds: Dataset, split: SplitSet) -> CorrelationTable:
    """Correlations over the annotation-train rows only."""
    train = ds.rows[split.annotation_train]
    stds = np.std(train, axis=0)
    usable = np.flatnonzero(stds > 0)
    if usable.size < 2:
        raise DatasetError(
            f"need >= 2 non-constant dimensions on annotation-train rows, "
            f"found {usable.size}"
        )
    corr = np.corrcoef(train[:, usable], rowvar=False)
    corr = np.clip(corr, -1.0, 1.0)
    entries = []
    for i in range(usable.size):
        for j in range(i + 1, usable.size):
            pair = DimensionPair(int(usable[i]), int(usable[j]))
            entries.append((pair, float(corr[i, j])))
    return CorrelationTable(entries=tuple(entries), usable_dims=tuple(int(d) for d in usable))


def select_pairs(table: CorrelationTable, k: int, seed: int = 0, mode: str = "rank") -> list:
    """Pick annotation pairs from a correlation table.

    rank mode returns the min(k, len(table)) pairs with smallest absolute
    correlation, ties broken by (dim_a, dim_b). sample mode draws
    uniformly without replacement from the lowest-|rho| quartile (at least
    one pair), returning min(k, quartile size) pairs in draw order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(table) == 0:
        raise ValueError("correlation table is empty")
    if mode not in ("rank", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    ranked = sorted(table.entries, key=lambda e: (abs(e[1]), e[0].dim_a, e[0].dim_b))
    if mode == "rank":
        return [pair for pair, _ in ranked[: min(k, len(ranked))]]
    pool = ranked[: max(1, math.ceil(len(ranked) / 4))]
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(pool), size=min(k, len(pool)), replace=False)
    return [pool[i][0] for i in picks]
