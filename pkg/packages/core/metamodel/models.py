from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple

from .errors import ConstraintError, ValidationError


ENTITIES = "entities"
STATES = "states"
MILIEUS = "milieus"
UPDATE_RULES = "update-rules"
ADAPTATION_RULES = "adaptation-rules"
ADAPTATION_END = "adaptation-end"

UPDATE_FN = "update-fn"
ADAPTATION_FN = "adaptation-fn"

EXTRA_PREFIX = "extra:"

STRUCTURE_KINDS: Tuple[str, ...] = (
    ENTITIES,
    STATES,
    MILIEUS,
    UPDATE_RULES,
    ADAPTATION_RULES,
    ADAPTATION_END,
)
OPERATION_KINDS: Tuple[str, ...] = (UPDATE_FN, ADAPTATION_FN)


def extra_kind(name: str) -> str:
    return f"{EXTRA_PREFIX}{name}"


def is_extra_kind(kind: str) -> bool:
    return kind.startswith(EXTRA_PREFIX) and len(kind) > len(EXTRA_PREFIX)


def extra_name(kind: str) -> str:
    return kind[len(EXTRA_PREFIX):]


class Regime(str, Enum):
    VIRTUAL = "virtual"
    METASTABLE = "metastable"
    ACTUAL = "actual"


class StateSetKind(str, Enum):
    FINITE = "finite"
    REAL_INTERVAL = "real-interval"


class ComparisonScope(str, Enum):
    FINAL_STATE = "final-state"
    TRAJECTORY_ROW = "trajectory-row"


@dataclass(frozen=True)
class StateSet:
    """Q: either an ordered finite set of k states or a closed real interval."""

    kind: StateSetKind
    values: Tuple[Any, ...] = ()
    lo: Optional[float] = None
    hi: Optional[float] = None

    @classmethod
    def finite(cls, values: Tuple[Any, ...]) -> "StateSet":
        values = tuple(values)
        if not values:
            raise ValidationError("a finite state set needs at least one state")
        if len(set(values)) != len(values):
            raise ValidationError(f"states must be pairwise distinct: {values!r}")
        return cls(kind=StateSetKind.FINITE, values=values)

    @classmethod
    def real_interval(cls, lo: float, hi: float) -> "StateSet":
        if lo > hi:
            raise ValidationError(f"empty interval [{lo}, {hi}]")
        return cls(kind=StateSetKind.REAL_INTERVAL, lo=float(lo), hi=float(hi))

    @property
    def is_finite(self) -> bool:
        return self.kind == StateSetKind.FINITE

    @property
    def k(self) -> Optional[int]:
        return len(self.values) if self.is_finite else None

    def contains(self, value: Any) -> bool:
        if self.is_finite:
            return value in self.values
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return self.lo <= value <= self.hi

    def position(self, value: Any) -> int:
        return self.values.index(value)

    def same_extension(self, other: "StateSet") -> bool:
        if self.kind != other.kind:
            return False
        if self.is_finite:
            return set(self.values) == set(other.values)
        return (self.lo, self.hi) == (other.lo, other.hi)


@dataclass(frozen=True)
class Entities:
    states: Tuple[Any, ...]

    @property
    def e(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Milieus:
    """Adjacency list of 1-based neighbour indices, one tuple per entity.

    Index 0 addresses the phantom neighbour of a fixed boundary and is only
    legal when ``boundary_state`` is set.
    """

    neighbor_lists: Tuple[Tuple[int, ...], ...]
    uniform_arity: Optional[int] = None
    boundary_state: Optional[Any] = None

    @property
    def e(self) -> int:
        return len(self.neighbor_lists)

    @property
    def m(self) -> Optional[int]:
        lengths = {len(neighbors) for neighbors in self.neighbor_lists}
        if len(lengths) == 1:
            return lengths.pop()
        return None


@dataclass(frozen=True)
class RuleSet:
    update_rules: Tuple[Any, ...] = ()
    adaptation_rules: Tuple[Any, ...] = ()

    @property
    def u(self) -> int:
        return len(self.update_rules)

    @property
    def a(self) -> int:
        return len(self.adaptation_rules)


@dataclass(frozen=True)
class AdaptationEnd:
    targets: Tuple[Any, ...]
    scope: ComparisonScope = ComparisonScope.FINAL_STATE

    @property
    def p(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class ConcreteParameters:
    """Everything that turns a virtual model into a metastable one.

    ``bindings`` carries parameters of the bound functions that are not
    structures of their own (the weights of a network unit, for example);
    ``extras`` carries further structures and the ids of further operations.
    """

    entities: Entities
    state_set: StateSet
    milieus: Milieus
    rules: RuleSet = field(default_factory=RuleSet)
    adaptation_end: Optional[AdaptationEnd] = None
    update_fn_id: str = "rule-table"
    adaptation_fn_id: Optional[str] = None
    t: int = 1
    g: int = 1
    l: float = 0.0
    bindings: Mapping[str, Any] = field(default_factory=dict)
    extras: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class AdaptationRecord:
    iteration: int
    loss: float
    accepted: bool
    label: Optional[str] = None


@dataclass(frozen=True)
class Trajectory:
    rows: Tuple[Entities, ...]
    adaptation_log: Tuple[AdaptationRecord, ...] = ()

    @property
    def t_bar(self) -> int:
        return len(self.rows) - 1

    @property
    def final(self) -> Entities:
        return self.rows[-1]


@dataclass(frozen=True)
class SystemModel:
    regime: Regime
    declared_structures: Tuple[str, ...]
    declared_operations: Tuple[str, ...]
    params: Optional[ConcreteParameters] = None
    trajectory: Optional[Trajectory] = None

    @property
    def s(self) -> int:
        return len(self.declared_structures)

    @property
    def o(self) -> int:
        return len(self.declared_operations)

    @property
    def current(self) -> Entities:
        if self.trajectory is not None:
            return self.trajectory.final
        if self.params is None:
            raise ConstraintError("a virtual model has no entity states")
        return self.params.entities

    @property
    def time_step(self) -> int:
        return self.trajectory.t_bar if self.trajectory is not None else 0

    def declares(self, kind: str) -> bool:
        return kind in self.declared_structures or kind in self.declared_operations


def derived_counts(model: SystemModel) -> Dict[str, Optional[int]]:
    """The counts a model's parameters imply; they are never inputs."""
    counts: Dict[str, Optional[int]] = {"s": model.s, "o": model.o}
    params = model.params
    if params is None:
        return counts
    counts.update(
        {
            "e": params.entities.e,
            "k": params.state_set.k,
            "m": params.milieus.m,
            "u": params.rules.u,
            "a": params.rules.a,
            "p": params.adaptation_end.p if params.adaptation_end else 0,
            "t": params.t,
            "g": params.g,
        }
    )
    return counts
