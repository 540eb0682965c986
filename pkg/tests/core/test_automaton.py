import numpy as np
import pytest

from packages.core.ca.automaton import (
    CellularAutomaton,
    ca_to_system_model,
    elementary_automaton,
    pattern_grid,
    random_cells,
    system_model_to_ca,
    validate_automaton,
)
from packages.core.ca.rules import elementary_rule_table
from packages.core.metamodel.engine import actualize, step
from packages.core.metamodel.errors import ValidationError
from packages.core.metamodel.models import (
    ADAPTATION_END,
    ADAPTATION_FN,
    ENTITIES,
    MILIEUS,
    STATES,
    UPDATE_FN,
    AdaptationEnd,
)


def _reference_evolution(rule, cells, steps):
    """Direct elementary automaton on a torus, written against numpy only."""
    bits = np.array([(rule >> n) & 1 for n in range(8)], dtype=np.int8)
    row = np.array(cells, dtype=np.int8)
    rows = [row]
    for _ in range(steps):
        index = 4 * np.roll(row, 1) + 2 * row + np.roll(row, -1)
        row = bits[index]
        rows.append(row)
    return np.array(rows)


@pytest.mark.slow
@pytest.mark.parametrize("rule", [0, 30, 90, 110, 204, 232])
def test_metamodel_matches_direct_evolution(rule):
    for seed in range(20):
        cells = random_cells(64, seed)
        model = ca_to_system_model(elementary_automaton(rule, cells), steps=100)
        trajectory = actualize(model).trajectory
        produced = np.array([row.states for row in trajectory.rows], dtype=np.int8)
        expected = _reference_evolution(rule, cells, 100)
        assert produced.shape == (101, 64)
        assert int(np.count_nonzero(produced != expected)) == 0


def test_ca_model_declarations():
    model = ca_to_system_model(elementary_automaton(232, (0, 1, 1, 0)))
    assert model.declared_structures == (ENTITIES, STATES, MILIEUS)
    assert model.declared_operations == (UPDATE_FN,)
    assert model.params.rules.update_rules == (elementary_rule_table(232),)


def test_adaptive_ca_declares_adaptation():
    end = AdaptationEnd(targets=(0, 0, 0, 0))
    model = ca_to_system_model(elementary_automaton(90, (0, 1, 1, 0)), adaptation_end=end, g=50)
    assert ADAPTATION_END in model.declared_structures
    assert ADAPTATION_FN in model.declared_operations
    assert model.params.adaptation_fn_id == "evolve-rules"


def test_system_model_to_ca_round_trip():
    ca = elementary_automaton(30, (0, 0, 1, 0, 0), boundary="fixed")
    assert system_model_to_ca(ca_to_system_model(ca)) == ca


def test_validate_automaton_rejects_mismatches():
    ca = elementary_automaton(30, (0, 1, 0, 1))
    with pytest.raises(ValidationError):
        validate_automaton(CellularAutomaton(**{**ca.__dict__, "cells": (0, 2, 0, 1)}))
    with pytest.raises(ValidationError):
        validate_automaton(CellularAutomaton(**{**ca.__dict__, "neighborhoods": ca.neighborhoods[:3]}))


def test_random_cells_are_seeded():
    assert random_cells(32, 7) == random_cells(32, 7)
    assert set(random_cells(32, 7)) <= {0, 1}


def test_pattern_grid_places_glider():
    grid = pattern_grid("glider", 5, 5, top=0, left=0)
    assert grid[0] == (0, 1, 0, 0, 0)
    assert grid[2] == (1, 1, 1, 0, 0)
    with pytest.raises(ValidationError):
        pattern_grid("spaceship", 5, 5)


def test_rule_110_single_step():
    model = ca_to_system_model(elementary_automaton(110, (0, 0, 1, 0, 0)))
    assert step(model).current.states == (0, 1, 1, 0, 0)
