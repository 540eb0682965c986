from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import pytest

from packages.core.ca.automaton import ca_to_system_model, elementary_automaton
from packages.core.ca.rules import RuleTable
from packages.core.metamodel.engine import (
    actualize,
    adapt,
    concretize,
    neighborhood_key,
    new_virtual,
    split_neighborhood,
    step,
)
from packages.core.metamodel.errors import (
    BindingError,
    ConstraintError,
    PreconditionError,
    RegimeError,
    UndefinedTransitionError,
    ValidationError,
)
from packages.core.metamodel.models import (
    ENTITIES,
    MILIEUS,
    OPERATION_KINDS,
    STATES,
    STRUCTURE_KINDS,
    UPDATE_FN,
    UPDATE_RULES,
    ConcreteParameters,
    Entities,
    Milieus,
    Regime,
    RuleSet,
    StateSet,
    derived_counts,
    extra_kind,
)


CELLS = (0, 1, 1, 0, 1, 0, 0, 1)


def _rule_model(rule=110, cells=CELLS, steps=3, boundary="ring"):
    return ca_to_system_model(elementary_automaton(rule, cells, boundary=boundary), steps=steps)


def _ring_params(rules=(), update_fn_id="rule-table", entities=(0, 1, 0)):
    return ConcreteParameters(
        entities=Entities(entities),
        state_set=StateSet.finite((0, 1)),
        milieus=Milieus(neighbor_lists=((3, 2), (1, 3), (2, 1))),
        rules=RuleSet(update_rules=tuple(rules)),
        update_fn_id=update_fn_id,
    )


def test_new_virtual_full_tuple():
    model = new_virtual(STRUCTURE_KINDS, OPERATION_KINDS)
    assert model.regime == Regime.VIRTUAL
    assert (model.s, model.o) == (6, 2)
    assert model.params is None
    assert model.trajectory is None


def test_new_virtual_rejects_empty_and_unknown_kinds():
    with pytest.raises(ConstraintError):
        new_virtual((), (UPDATE_FN,))
    with pytest.raises(ConstraintError):
        new_virtual((ENTITIES,), ())
    with pytest.raises(ConstraintError):
        new_virtual(("weather",), (UPDATE_FN,))
    with pytest.raises(ConstraintError):
        new_virtual((ENTITIES, ENTITIES), (UPDATE_FN,))


def test_new_virtual_accepts_extra_kinds():
    model = new_virtual((ENTITIES, extra_kind("energy")), (UPDATE_FN,))
    assert model.declares(extra_kind("energy"))


def test_concretize_only_from_virtual():
    model = _rule_model()
    assert model.regime == Regime.METASTABLE
    with pytest.raises(RegimeError):
        concretize(model, model.params)


def test_concretize_requires_declared_structures_bound():
    virtual = new_virtual((ENTITIES, STATES, MILIEUS, UPDATE_RULES), (UPDATE_FN,))
    with pytest.raises(BindingError) as excinfo:
        concretize(virtual, _ring_params())
    assert excinfo.value.kind == UPDATE_RULES


def test_concretize_rejects_unknown_update_function():
    virtual = new_virtual((ENTITIES, STATES, MILIEUS), (UPDATE_FN,))
    with pytest.raises(BindingError):
        concretize(virtual, _ring_params(update_fn_id="telepathy"))


def test_concretize_rejects_states_outside_state_set():
    virtual = new_virtual((ENTITIES, STATES, MILIEUS), (UPDATE_FN,))
    with pytest.raises(ValidationError):
        concretize(virtual, _ring_params(entities=(0, 2, 0)))


def test_concretize_rejects_self_in_milieu():
    virtual = new_virtual((ENTITIES, STATES, MILIEUS), (UPDATE_FN,))
    params = replace(_ring_params(), milieus=Milieus(neighbor_lists=((1, 2), (1, 3), (2, 1))))
    with pytest.raises(ValidationError):
        concretize(virtual, params)


def test_step_and_actualize_need_concrete_models():
    virtual = new_virtual((ENTITIES,), (UPDATE_FN,))
    with pytest.raises(RegimeError):
        step(virtual)
    with pytest.raises(RegimeError):
        actualize(virtual)
    actual = actualize(_rule_model())
    with pytest.raises(RegimeError):
        actualize(actual)


def test_actualize_produces_t_plus_one_rows():
    actual = actualize(_rule_model(steps=5))
    assert actual.regime == Regime.ACTUAL
    assert len(actual.trajectory.rows) == 6
    assert actual.trajectory.rows[0].states == CELLS
    assert actual.time_step == 5


def test_actualize_rejects_zero_steps():
    with pytest.raises(PreconditionError):
        actualize(_rule_model(), 0)


def test_step_extends_trajectory_like_actualize():
    model = _rule_model()
    once = step(model)
    assert once.regime == Regime.ACTUAL
    twice = step(once)
    assert twice.trajectory.rows == actualize(model, 2).trajectory.rows


def test_step_order_does_not_change_result():
    model = _rule_model()
    expected = step(model)
    reverse = list(range(len(CELLS), 0, -1))
    shuffled = [3, 8, 1, 6, 2, 7, 5, 4]
    assert step(model, order=reverse) == expected
    assert step(model, order=shuffled) == expected


def test_step_with_executor_matches_sequential():
    model = _rule_model()
    with ThreadPoolExecutor(max_workers=4) as pool:
        assert step(model, executor=pool) == step(model)


def test_step_rejects_bad_order():
    with pytest.raises(PreconditionError):
        step(_rule_model(), order=[1, 1, 2, 3, 4, 5, 6, 7])


def test_synchronous_update_reads_the_snapshot():
    # rule 170 copies the right neighbour; a sequential update would smear it
    model = _rule_model(rule=170, cells=(1, 0, 0, 1), steps=1)
    assert step(model).current.states == (0, 0, 1, 1)


def test_fixed_boundary_reads_phantom_zero():
    model = _rule_model(rule=170, cells=(1, 0, 0, 1), steps=1, boundary="fixed")
    assert step(model).current.states == (0, 0, 1, 0)


def test_partial_rule_table_raises_on_missing_entry():
    table = RuleTable.from_entries((0, 1), 3, {(0, 0, 0): 0, (0, 1, 0): 1})
    virtual = new_virtual((ENTITIES, STATES, MILIEUS, UPDATE_RULES), (UPDATE_FN,))
    model = concretize(virtual, _ring_params(rules=(table,), entities=(1, 1, 0)))
    with pytest.raises(UndefinedTransitionError) as excinfo:
        actualize(model)
    assert excinfo.value.entity == 1
    assert excinfo.value.time_step == 0
    assert excinfo.value.neighborhood == (0, 1, 1)


def test_neighborhood_key_places_own_state_in_the_middle():
    key = neighborhood_key("c", ("a", "b", "d", "e"))
    assert key == ("a", "b", "c", "d", "e")
    assert split_neighborhood(key) == ("c", ("a", "b", "d", "e"))


def test_derived_counts():
    counts = derived_counts(_rule_model())
    assert counts == {"s": 3, "o": 1, "e": 8, "k": 2, "m": 2, "u": 1, "a": 0, "p": 0, "t": 3, "g": 1}
    assert derived_counts(new_virtual((ENTITIES,), (UPDATE_FN,))) == {"s": 1, "o": 1}


def test_adapt_without_adaptation_function():
    with pytest.raises(BindingError):
        adapt(_rule_model())
