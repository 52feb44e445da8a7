"""Human-guided feature engineering: rectangles on scatterplots as features.

Workers (or the built-in synthetic annotator) draw labeled rectangles on
2-D scatterplots of low-correlation dimension pairs. Models that beat the
validation gate become feature columns weighted by their test-split
accuracy, and a boosted-tree classifier trained on those features is
compared against one trained on the raw worker-used dimensions.
"""

from .annotate import AnnotatorBudget, propose_model
from .boosting import GradientBoostedClassifier, evaluate_accuracy
from .compare import ComparisonReport, run_comparison
from .data import (
    ColumnKind,
    Dataset,
    DatasetError,
    NormStats,
    SplitSet,
    SplitSizes,
    ZeroVarianceError,
    balance_classes,
    load_csv,
    load_schema,
    make_splits,
    normalize_pair,
    synth_clusters,
)
from .features import (
    FeatureMatrix,
    RegionFeatureTransformer,
    build_feature_matrix,
    feature_value,
    transform_rows,
    used_dimensions,
)
from .linear import PerceptronClassifier, RidgeClassifier
from .model_selection import (
    CvReport,
    default_param_grid,
    grid_search_cv,
    reduced_param_grid,
)
from .pairs import CorrelationTable, DimensionPair, correlation_table, select_pairs
from .regions import (
    NoCoverageError,
    Rectangle,
    RectangleModel,
    accept_model,
    assign,
    contains,
    model_accuracy,
    score_model,
)
from .store import ModelStore

__version__ = "0.1.0"

__all__ = [
    "AnnotatorBudget",
    "ColumnKind",
    "ComparisonReport",
    "CorrelationTable",
    "CvReport",
    "Dataset",
    "DatasetError",
    "DimensionPair",
    "FeatureMatrix",
    "GradientBoostedClassifier",
    "ModelStore",
    "NoCoverageError",
    "NormStats",
    "PerceptronClassifier",
    "Rectangle",
    "RectangleModel",
    "RegionFeatureTransformer",
    "RidgeClassifier",
    "SplitSet",
    "SplitSizes",
    "ZeroVarianceError",
    "accept_model",
    "assign",
    "balance_classes",
    "build_feature_matrix",
    "contains",
    "correlation_table",
    "default_param_grid",
    "evaluate_accuracy",
    "feature_value",
    "grid_search_cv",
    "load_csv",
    "load_schema",
    "make_splits",
    "model_accuracy",
    "normalize_pair",
    "propose_model",
    "reduced_param_grid",
    "run_comparison",
    "score_model",
    "select_pairs",
    "synth_clusters",
    "transform_rows",
    "used_dimensions",
]
