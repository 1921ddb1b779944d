"""Intertemporal discounting with deformed exponentials and subjective time.

The package evaluates a two-axis family of discount models (value-side
deformation q crossed with an optional psychophysical time law), measures
their discount rate and inconsistency degree, splits the inconsistency
into additive value/time channels, reconstructs curves by integrating
that split, simulates adjusting-amount titration, and fits the model
families to indifference-point data.
"""

from .deformed import (
    Deformation,
    TimePerception,
    q_exp,
    q_log,
    subjective_time,
    weber_fraction,
)
from .errors import (
    DivergenceError,
    DomainError,
    FormatError,
    InsufficientDataError,
    NoCrossingError,
    NonConvergenceError,
    StepFailureError,
    TempodiscError,
    UnsupportedModelError,
)
from .fitting import (
    FitConfig,
    FitResult,
    IndifferenceDataset,
    ModelFamily,
    aic,
    compare_models,
    family_from_token,
    fit_model,
    param_count,
    read_dataset,
)
from .models import (
    DecompositionReport,
    ImpulsivityRegime,
    ModelSpec,
    classify_impulsivity,
    decompose_inconsistency,
    discount_rate,
    f_component,
    h_component,
    inconsistency,
    initial_rate,
    value,
    value_curve,
)
from .numerics import (
    ReconstructionResult,
    ScheduledReward,
    central_difference,
    crossing_time,
    reconstruct_from_inconsistency,
)
from .titration import (
    ChoiceAgent,
    TitrationConfig,
    TitrationTrace,
    agent_choose,
    generate_dataset,
    run_titration,
)

__version__ = "0.1.0"

__all__ = [
    "Deformation",
    "TimePerception",
    "q_exp",
    "q_log",
    "subjective_time",
    "weber_fraction",
    "TempodiscError",
    "DomainError",
    "DivergenceError",
    "StepFailureError",
    "NoCrossingError",
    "InsufficientDataError",
    "NonConvergenceError",
    "UnsupportedModelError",
    "FormatError",
    "ModelSpec",
    "DecompositionReport",
    "ImpulsivityRegime",
    "value",
    "value_curve",
    "discount_rate",
    "initial_rate",
    "inconsistency",
    "decompose_inconsistency",
    "h_component",
    "f_component",
    "classify_impulsivity",
    "central_difference",
    "reconstruct_from_inconsistency",
    "ReconstructionResult",
    "ScheduledReward",
    "crossing_time",
    "IndifferenceDataset",
    "ModelFamily",
    "FitConfig",
    "FitResult",
    "fit_model",
    "compare_models",
    "aic",
    "param_count",
    "family_from_token",
    "read_dataset",
    "ChoiceAgent",
    "TitrationConfig",
    "TitrationTrace",
    "agent_choose",
    "run_titration",
    "generate_dataset",
]
