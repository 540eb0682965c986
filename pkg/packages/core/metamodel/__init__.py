from .engine import actualize, adapt, concretize, new_virtual, step, validate_parameters
from .errors import MetamodelError
from .loss import loss
from .models import (
    AdaptationEnd,
    ConcreteParameters,
    Entities,
    Milieus,
    Regime,
    RuleSet,
    StateSet,
    SystemModel,
    Trajectory,
    derived_counts,
)
from .registry import FunctionRegistry, default_registry
from .serialization import load_model, save_model

__all__ = [
    "actualize",
    "adapt",
    "concretize",
    "new_virtual",
    "step",
    "validate_parameters",
    "MetamodelError",
    "loss",
    "AdaptationEnd",
    "ConcreteParameters",
    "Entities",
    "Milieus",
    "Regime",
    "RuleSet",
    "StateSet",
    "SystemModel",
    "Trajectory",
    "derived_counts",
    "FunctionRegistry",
    "default_registry",
    "load_model",
    "save_model",
]
