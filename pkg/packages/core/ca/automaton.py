from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..metamodel.engine import concretize, new_virtual
from ..metamodel.errors import BindingError, CapabilityError, UndefinedTransitionError, ValidationError
from ..metamodel.models import (
    ADAPTATION_END,
    ADAPTATION_FN,
    ENTITIES,
    MILIEUS,
    STATES,
    UPDATE_FN,
    UPDATE_RULES,
    AdaptationEnd,
    ConcreteParameters,
    Entities,
    Milieus,
    Regime,
    RuleSet,
    StateSet,
    SystemModel,
)
from ..metamodel.registry import LocalUpdate
from .milieus import FIXED, RING, moore_milieu, ring_milieu
from .rules import BINARY_STATES, RuleTable, elementary_rule_table, life_rule_table


logger = logging.getLogger(__name__)

RULE_TABLE_FN = "rule-table"
EVOLVE_RULES_FN = "evolve-rules"

CA_STRUCTURES: Tuple[str, ...] = (ENTITIES, STATES, MILIEUS)
CA_OPERATIONS: Tuple[str, ...] = (UPDATE_FN,)

PATTERNS: Dict[str, Tuple[Tuple[int, ...], ...]] = {
    "blinker": ((1, 1, 1),),
    "glider": (
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 1),
    ),
}


@dataclass(frozen=True)
class CellularAutomaton:
    cells: Tuple[Any, ...]
    states: Tuple[Any, ...]
    neighborhoods: Tuple[Tuple[int, ...], ...]
    transition: RuleTable
    boundary_state: Optional[Any] = None

    @property
    def c(self) -> int:
        return len(self.cells)

    @property
    def n(self) -> int:
        return len(self.neighborhoods[0]) if self.neighborhoods else 0


def validate_automaton(ca: CellularAutomaton) -> None:
    allowed = set(ca.states)
    if len(allowed) != len(ca.states):
        raise ValidationError(f"states must be pairwise distinct: {ca.states!r}")
    if not ca.cells:
        raise ValidationError("an automaton needs at least one cell")
    for index, value in enumerate(ca.cells, start=1):
        if value not in allowed:
            raise ValidationError(f"cell {index} holds {value!r}, not a state")
    if len(ca.neighborhoods) != ca.c:
        raise ValidationError(f"{len(ca.neighborhoods)} neighbourhoods for {ca.c} cells")
    if len({len(neighbors) for neighbors in ca.neighborhoods}) != 1:
        raise ValidationError("all neighbourhoods must have the same size")
    phantom = ca.boundary_state is not None
    for index, neighbors in enumerate(ca.neighborhoods, start=1):
        for neighbor in neighbors:
            if neighbor == 0 and phantom:
                continue
            if not 1 <= neighbor <= ca.c:
                raise ValidationError(f"neighbour {neighbor} of cell {index} is outside 1..{ca.c}")
    if ca.transition.arity != ca.n + 1:
        raise ValidationError(f"transition arity {ca.transition.arity} != n+1 = {ca.n + 1}")
    if set(ca.transition.states) != allowed:
        raise ValidationError("transition states differ from the automaton's states")


def bind_rule_table(params: ConcreteParameters) -> LocalUpdate:
    rules = params.rules.update_rules
    if not rules or not isinstance(rules[0], RuleTable):
        raise BindingError(UPDATE_RULES, "the rule-table update function needs a rule table")
    entries = rules[0].entries

    def local(index: int, own: Any, neighbors: Tuple[Any, ...], t_bar: int) -> Any:
        half = len(neighbors) // 2
        key = neighbors[:half] + (own,) + neighbors[half:]
        try:
            return entries[key]
        except KeyError:
            raise UndefinedTransitionError(key) from None

    return local


def ca_to_system_model(
    ca: CellularAutomaton,
    steps: int = 1,
    adaptation_end: Optional[AdaptationEnd] = None,
    g: int = 1,
    l: float = 0.0,
) -> SystemModel:
    """Metastable model with E=C, Q=K, M=N and phi as a lookup into delta.

    Passing an adaptation end couples the automaton with the evolutionary
    rule search as its adaptation function.
    """
    validate_automaton(ca)
    structures = CA_STRUCTURES
    operations = CA_OPERATIONS
    if adaptation_end is not None:
        structures = structures + (ADAPTATION_END,)
        operations = operations + (ADAPTATION_FN,)
    params = ConcreteParameters(
        entities=Entities(tuple(ca.cells)),
        state_set=StateSet.finite(ca.states),
        milieus=Milieus(
            neighbor_lists=tuple(tuple(neighbors) for neighbors in ca.neighborhoods),
            uniform_arity=ca.n,
            boundary_state=ca.boundary_state,
        ),
        rules=RuleSet(update_rules=(ca.transition,)),
        adaptation_end=adaptation_end,
        update_fn_id=RULE_TABLE_FN,
        adaptation_fn_id=EVOLVE_RULES_FN if adaptation_end is not None else None,
        t=steps,
        g=g,
        l=l,
    )
    return concretize(new_virtual(structures, operations), params)


def system_model_to_ca(model: SystemModel) -> CellularAutomaton:
    if model.regime == Regime.VIRTUAL:
        raise CapabilityError("a virtual model has no automaton")
    params = model.params
    if params.update_fn_id != RULE_TABLE_FN or not params.state_set.is_finite:
        raise CapabilityError("only finite rule-table models correspond to cellular automata")
    rules = params.rules.update_rules
    if not rules or not isinstance(rules[0], RuleTable):
        raise BindingError(UPDATE_RULES, "the model carries no rule table")
    return CellularAutomaton(
        cells=params.entities.states,
        states=params.state_set.values,
        neighborhoods=params.milieus.neighbor_lists,
        transition=rules[0],
        boundary_state=params.milieus.boundary_state,
    )


def elementary_automaton(
    rule: int,
    cells: Sequence[int],
    radius: int = 1,
    boundary: str = RING,
) -> CellularAutomaton:
    if radius == 1:
        table = elementary_rule_table(rule)
    else:
        table = RuleTable.from_number(rule, BINARY_STATES, 2 * radius + 1)
    return CellularAutomaton(
        cells=tuple(int(value) for value in cells),
        states=BINARY_STATES,
        neighborhoods=ring_milieu(len(cells), radius, boundary),
        transition=table,
        boundary_state=0 if boundary == FIXED else None,
    )


def life_automaton(grid: Sequence[Sequence[int]], boundary: str = RING) -> CellularAutomaton:
    """Game of Life over a row-major grid."""
    height = len(grid)
    width = len(grid[0]) if height else 0
    cells = tuple(int(value) for row in grid for value in row)
    if len(cells) != width * height:
        raise ValidationError("grid rows must all have the same width")
    return CellularAutomaton(
        cells=cells,
        states=BINARY_STATES,
        neighborhoods=moore_milieu(width, height, boundary),
        transition=life_rule_table(),
        boundary_state=0 if boundary == FIXED else None,
    )


def pattern_grid(
    name: str,
    width: int,
    height: int,
    top: Optional[int] = None,
    left: Optional[int] = None,
) -> Tuple[Tuple[int, ...], ...]:
    if name not in PATTERNS:
        raise ValidationError(f"unknown pattern {name!r}; expected one of {sorted(PATTERNS)}")
    pattern = np.array(PATTERNS[name], dtype=int)
    rows, columns = pattern.shape
    if rows > height or columns > width:
        raise ValidationError(f"pattern {name} does not fit a {width}x{height} grid")
    top = (height - rows) // 2 if top is None else top
    left = (width - columns) // 2 if left is None else left
    grid = np.zeros((height, width), dtype=int)
    for row in range(rows):
        for column in range(columns):
            grid[(top + row) % height, (left + column) % width] = pattern[row, column]
    return tuple(tuple(int(value) for value in row) for row in grid)


def random_cells(c: int, seed: int = 0, states: Sequence[Any] = BINARY_STATES) -> Tuple[Any, ...]:
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(states), size=c)
    return tuple(states[int(pick)] for pick in picks)
