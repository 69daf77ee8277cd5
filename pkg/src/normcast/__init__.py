"""Collaborative preference prediction and norm inference.

normcast predicts a user's unknown preferences (reals in [-1, 1]) from
the known preferences of similar users, attaches a confidence to each
prediction, and converts the resulting values into permission or
prohibition norms via configurable threshold policies. An evaluation
harness measures prediction accuracy against held-out answers and the
correlation between confidence and prediction quality.
"""

__version__ = "0.1.0"

from .confidence import (
    ConfidenceParams,
    confidence_from_stats,
    rho_mu_confidence,
    sample_sd,
)
from .errors import (
    DimensionMismatchError,
    DuplicateEntryError,
    EmptySampleError,
    InvalidConfidenceError,
    InvalidSpecError,
    InvalidSplitError,
    MissingConfidenceError,
    NoCommonElementsError,
    NormcastError,
    NoSimilarUsersError,
    NotFoundError,
    OutOfScaleError,
    ParseError,
    UndefinedCorrelationError,
)
from .evaluate import (
    BaselineKind,
    ExperimentConfig,
    ExperimentReport,
    Hard,
    Medium,
    PredictionRecord,
    Regular,
    TuneResult,
    prepare_experiment,
    run_baseline,
    run_experiment,
    spearman,
    tune_confidence,
)
from .ingest import (
    RawResponse,
    SyntheticCohortSpec,
    dump_csv,
    generate_synthetic,
    load_csv,
    rescale_likert,
    to_scale,
)
from .norms import (
    ConfidentThresholdPolicy,
    ContextualThresholdPolicy,
    Deontic,
    HardThresholdPolicy,
    HardThresholds,
    Norm,
    NormDecision,
    NormOutcome,
    PredictionRegime,
    RegimeThresholds,
    ThresholdPolicy,
    classify_regime,
    confident_thresholds,
    hard_threshold_norm,
    infer_norm,
    norm_for_value,
    write_norm_records,
)
from .prediction import (
    FallbackPolicy,
    Prediction,
    complete_profile,
    fallback_value,
    make_average_predictor,
    predict_average,
)
from .preference_model import (
    CompletedProfile,
    PreferenceMatrix,
    Provenance,
    distance,
)
from .separation import (
    SEPARATION_MEASURES,
    CommonElements,
    CumulativeSeparation,
    SeparationMeasure,
    common_elements,
    cumulative_separation,
    get_separation_measure,
)
from .similarity import SimilarityParams, SimilarSet, knowers, similar_users

__all__ = [
    "BaselineKind",
    "CommonElements",
    "CompletedProfile",
    "ConfidenceParams",
    "ConfidentThresholdPolicy",
    "ContextualThresholdPolicy",
    "CumulativeSeparation",
    "Deontic",
    "DimensionMismatchError",
    "DuplicateEntryError",
    "EmptySampleError",
    "ExperimentConfig",
    "ExperimentReport",
    "FallbackPolicy",
    "Hard",
    "HardThresholdPolicy",
    "HardThresholds",
    "InvalidConfidenceError",
    "InvalidSpecError",
    "InvalidSplitError",
    "Medium",
    "MissingConfidenceError",
    "NoCommonElementsError",
    "Norm",
    "NormDecision",
    "NormOutcome",
    "NormcastError",
    "NoSimilarUsersError",
    "NotFoundError",
    "OutOfScaleError",
    "ParseError",
    "Prediction",
    "PredictionRecord",
    "PredictionRegime",
    "PreferenceMatrix",
    "Provenance",
    "RawResponse",
    "RegimeThresholds",
    "Regular",
    "SEPARATION_MEASURES",
    "SeparationMeasure",
    "SimilarSet",
    "SimilarityParams",
    "SyntheticCohortSpec",
    "ThresholdPolicy",
    "TuneResult",
    "UndefinedCorrelationError",
    "classify_regime",
    "common_elements",
    "complete_profile",
    "confidence_from_stats",
    "confident_thresholds",
    "cumulative_separation",
    "distance",
    "dump_csv",
    "fallback_value",
    "generate_synthetic",
    "get_separation_measure",
    "hard_threshold_norm",
    "infer_norm",
    "knowers",
    "load_csv",
    "make_average_predictor",
    "norm_for_value",
    "predict_average",
    "prepare_experiment",
    "rescale_likert",
    "rho_mu_confidence",
    "run_baseline",
    "run_experiment",
    "sample_sd",
    "similar_users",
    "spearman",
    "to_scale",
    "tune_confidence",
    "write_norm_records",
]
