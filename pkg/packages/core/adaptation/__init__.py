from .config import AdaptationConfig, MutationKind, SearchStrategy
from .evolution import evolve_model, evolve_rules

__all__ = ["AdaptationConfig", "MutationKind", "SearchStrategy", "evolve_model", "evolve_rules"]
