"""satcause: satisfaction classifiers + IPW causal effect estimation.

Two-stage workflow on survey-style tabular data: supervised classification
of a binary satisfaction target, then inverse-propensity-weighted
Horvitz-Thompson estimation of the effect of dichotomized service ratings,
validated against a built-in synthetic oracle with a known ground-truth
treatment effect.
"""

from ._kernels import BACKEND as kernel_backend
from .causal import (
    BalanceRecord,
    CausalReport,
    PropensityResult,
    TreatmentAssignment,
    WeightVector,
    dichotomize,
    estimate_effects,
    fit_propensity,
    ipw_weights,
    smd_balance,
)
from .errors import ConfigError, DataError, SatcauseError, SchemaError
from .evaluation import (
    CvReport,
    LearningCurve,
    RocResult,
    accuracy,
    grid_search,
    kfold_split,
    learning_curve,
    roc_curve,
)
from .attribution import (
    AttributionVector,
    ImportanceTable,
    gini_importance,
    shapley_summary,
    shapley_values,
)
from .learners import (
    FAMILIES,
    ModelSpec,
    TrainedModel,
    fit,
    make_spec,
    model_from_json,
    model_to_json,
    predict_labels,
    predict_scores,
)
from .preprocess import (
    FeatureMatrix,
    PreprocessReport,
    correlation_screen,
    deduplicate,
    encode_features,
    impute_median,
    scale_minmax,
    split_indices,
    train_test_split,
)
from .synth import OracleAte, SynthConfig, SynthDataset, generate, oracle_ate
from .tabular import (
    ColumnSpec,
    Dataset,
    SummaryReport,
    default_airline_schema,
    load_csv,
    summarize,
    write_csv,
)

__version__ = "0.1.0"
