from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..metamodel.errors import PreconditionError


class MutationKind(str, Enum):
    SINGLE_BIT_FLIP = "single-bit-flip"
    K_BIT_FLIP = "k-bit-flip"


class SearchStrategy(str, Enum):
    HILL_CLIMB = "hill-climb-first-improvement"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class AdaptationConfig:
    g: int = 1000
    l: float = 0.0
    seed: int = 0
    mutation: MutationKind = MutationKind.SINGLE_BIT_FLIP
    flips: int = 1
    strategy: SearchStrategy = SearchStrategy.HILL_CLIMB
    workers: int = 1
    exhaustive_limit: int = 256

    @property
    def entries_per_mutation(self) -> int:
        return 1 if self.mutation == MutationKind.SINGLE_BIT_FLIP else self.flips


def validate_config(cfg: AdaptationConfig) -> None:
    if cfg.g < 1:
        raise PreconditionError(f"g must be at least 1, got {cfg.g}")
    if cfg.l < 0:
        raise PreconditionError(f"loss tolerance must be non-negative, got {cfg.l}")
    if cfg.mutation == MutationKind.K_BIT_FLIP and cfg.flips < 1:
        raise PreconditionError(f"k-bit-flip needs k >= 1, got {cfg.flips}")
    if cfg.workers < 1:
        raise PreconditionError(f"workers must be at least 1, got {cfg.workers}")
