import numpy as np
import pytest

import scatterbox as sb
from scatterbox.boosting import warm_up_kernels


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    """Compile the tree kernels once so timed tests measure steady state."""
    warm_up_kernels()


@pytest.fixture(scope="session")
def cluster_dataset():
    return sb.synth_clusters(10, 2, 1000, 0.5, seed=7)


@pytest.fixture(scope="session")
def cluster_split(cluster_dataset):
    return sb.make_splits(cluster_dataset, sb.SplitSizes(100, 100, 200, 1400), seed=7)


def identity_stats():
    return sb.NormStats(0.0, 1.0, 0.0, 1.0)


def plain_dataset(rows, labels, name="plain"):
    """Dataset wrapper for raw coordinate tests (no normalization effect)."""
    rows = np.asarray(rows, dtype=float)
    columns = tuple((f"c{i}", sb.ColumnKind.CONTINUOUS) for i in range(rows.shape[1]))
    return sb.Dataset(name=name, columns=columns, rows=rows,
                      labels=np.asarray(labels, dtype=np.int64))
