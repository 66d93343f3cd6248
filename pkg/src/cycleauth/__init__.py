"""Additive time-series activity modeling and continuous authentication.

The forecast layer decomposes a signal into a changepoint trend, Fourier
seasonalities and fixed-effect event windows, fitted by penalized least
squares with Monte Carlo prediction intervals.  The authentication layer
turns per-activity triaxial models into accept / escalate / reject
decisions via prediction-band coverage and a one-class novelty gate, and
the energy layer prices sensor duty-cycle schedules driven by a
risk-level policy.
"""

from .dataio import CvSplit, Recording, load_csv, make_cv_splits, write_csv
from .energy import (
    DutyCycleSchedule,
    SensorPowerProfile,
    default_power_profiles,
    duty_schedule,
    estimate_energy,
    load_power_profiles,
)
from .evaluation import MetricReport, cv_summary, metrics, run_cv
from .events import EventTerm, eval_events
from .exceptions import (
    ColdStartError,
    ContractViolationError,
    CycleAuthError,
    DataError,
    DegenerateRateError,
    InsufficientCyclesError,
    InsufficientDataError,
    InsufficientSimulationsError,
    ParseError,
    ProfileMismatchError,
    TooShortWindowError,
    TrainingContractError,
    UnderdeterminedFitError,
)
from .features import (
    ACTIVITY_LABELS,
    ActivityWindow,
    extract_features,
)
from .fitting import FitConfig, SeasonalitySpec, fit
from .forecaster import AdditiveForecaster
from .model import (
    ForecastModel,
    PredictionBand,
    TimeSeries,
    evaluate,
    model_from_json,
    model_to_json,
    predict,
)
from .novelty import MahalanobisNovelty, train_novelty
from .period import PeriodEstimate, estimate_period
from .policy import PolicyConfig, RiskLevel, policy_step
from .profile import (
    ActivityProfile,
    AuthConfig,
    AuthDecision,
    Verdict,
    accept_and_update,
    authenticate,
    enroll,
    profile_from_json,
    profile_to_json,
    sample_window,
)
from .seasonality import SeasonalityParams, eval_seasonality
from .trend import (
    TrendParams,
    continuity_gammas,
    eval_linear_trend,
    eval_logistic_trend,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVITY_LABELS",
    "ActivityProfile",
    "ActivityWindow",
    "AdditiveForecaster",
    "AuthConfig",
    "AuthDecision",
    "ColdStartError",
    "ContractViolationError",
    "CvSplit",
    "CycleAuthError",
    "DataError",
    "DegenerateRateError",
    "DutyCycleSchedule",
    "EventTerm",
    "FitConfig",
    "ForecastModel",
    "InsufficientCyclesError",
    "InsufficientDataError",
    "InsufficientSimulationsError",
    "MahalanobisNovelty",
    "MetricReport",
    "ParseError",
    "PeriodEstimate",
    "PolicyConfig",
    "PredictionBand",
    "ProfileMismatchError",
    "Recording",
    "RiskLevel",
    "SeasonalityParams",
    "SeasonalitySpec",
    "SensorPowerProfile",
    "TimeSeries",
    "TooShortWindowError",
    "TrainingContractError",
    "TrendParams",
    "UnderdeterminedFitError",
    "Verdict",
    "accept_and_update",
    "authenticate",
    "continuity_gammas",
    "cv_summary",
    "default_power_profiles",
    "duty_schedule",
    "enroll",
    "estimate_energy",
    "estimate_period",
    "eval_events",
    "eval_linear_trend",
    "eval_logistic_trend",
    "eval_seasonality",
    "evaluate",
    "extract_features",
    "fit",
    "load_csv",
    "load_power_profiles",
    "make_cv_splits",
    "metrics",
    "model_from_json",
    "model_to_json",
    "policy_step",
    "predict",
    "profile_from_json",
    "profile_to_json",
    "run_cv",
    "sample_window",
    "train_novelty",
    "write_csv",
]
