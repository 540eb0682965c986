from __future__ import annotations

import logging
from concurrent.futures import Executor
from dataclasses import replace
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from ..tracing import span
from .errors import (
    BindingError,
    ConstraintError,
    PreconditionError,
    RegimeError,
    UndefinedTransitionError,
    ValidationError,
)
from .models import (
    ADAPTATION_END,
    ADAPTATION_FN,
    ADAPTATION_RULES,
    ComparisonScope,
    ConcreteParameters,
    Entities,
    Milieus,
    OPERATION_KINDS,
    Regime,
    STRUCTURE_KINDS,
    SystemModel,
    Trajectory,
    UPDATE_FN,
    UPDATE_RULES,
    extra_name,
    is_extra_kind,
)
from .registry import FunctionRegistry, LocalUpdate, default_registry


logger = logging.getLogger(__name__)


def neighborhood_key(own: Any, milieu_states: Sequence[Any]) -> Tuple[Any, ...]:
    """Place the entity's own state in the middle of its milieu states."""
    half = len(milieu_states) // 2
    return tuple(milieu_states[:half]) + (own,) + tuple(milieu_states[half:])


def split_neighborhood(key: Sequence[Any]) -> Tuple[Any, Tuple[Any, ...]]:
    half = (len(key) - 1) // 2
    return key[half], tuple(key[:half]) + tuple(key[half + 1:])


def new_virtual(structure_kinds: Iterable[str], operation_kinds: Iterable[str]) -> SystemModel:
    structures = tuple(structure_kinds)
    operations = tuple(operation_kinds)
    check_declarations(structures, operations)
    return SystemModel(
        regime=Regime.VIRTUAL,
        declared_structures=structures,
        declared_operations=operations,
    )


def concretize(
    model: SystemModel,
    params: ConcreteParameters,
    registry: Optional[FunctionRegistry] = None,
) -> SystemModel:
    _require_regime(model, (Regime.VIRTUAL,), "concretize")
    registry = registry or default_registry()
    validate_parameters(params, registry)
    check_bindings(model.declared_structures, model.declared_operations, params, registry)
    logger.debug(
        "model_concretized e=%s update_fn=%s adaptation_fn=%s",
        params.entities.e,
        params.update_fn_id,
        params.adaptation_fn_id,
    )
    return replace(model, regime=Regime.METASTABLE, params=params, trajectory=None)


def check_declarations(structures: Sequence[str], operations: Sequence[str]) -> None:
    if not structures:
        raise ConstraintError("a system model needs at least one structure (s >= 1)")
    if not operations:
        raise ConstraintError("a system model needs at least one operation (o >= 1)")
    _check_kinds(tuple(structures), STRUCTURE_KINDS, "structure")
    _check_kinds(tuple(operations), OPERATION_KINDS, "operation")
    overlap = set(structures) & set(operations)
    if overlap:
        raise ConstraintError(f"kinds declared as both structure and operation: {sorted(overlap)}")


def check_bindings(
    structures: Sequence[str],
    operations: Sequence[str],
    params: ConcreteParameters,
    registry: Optional[FunctionRegistry] = None,
) -> None:
    """Every declared kind must have a value or function bound in ``params``."""
    registry = registry or default_registry()
    for kind in structures:
        _check_structure_binding(kind, params)
    for kind in operations:
        _check_operation_binding(kind, params, registry)


def validate_parameters(params: ConcreteParameters, registry: Optional[FunctionRegistry] = None) -> None:
    registry = registry or default_registry()
    entities = params.entities.states
    e = len(entities)
    if e < 1:
        raise ValidationError("a model needs at least one entity")
    for index, value in enumerate(entities, start=1):
        if not params.state_set.contains(value):
            raise ValidationError(f"state {value!r} of entity {index} is outside the state set")
    _validate_milieus(params.milieus, e, params)
    _validate_rules(params)
    end = params.adaptation_end
    if end is not None:
        if end.p < 1:
            raise ValidationError("the adaptation end needs at least one target")
        if end.scope == ComparisonScope.FINAL_STATE and end.p != e:
            raise ValidationError(f"final-state adaptation end has p={end.p} targets for e={e} entities")
        for value in end.targets:
            if not params.state_set.contains(value):
                raise ValidationError(f"target {value!r} is outside the state set")
    if params.t < 1:
        raise ValidationError(f"t must be at least 1, got {params.t}")
    if params.adaptation_fn_id is not None and params.g < 1:
        raise ValidationError(f"g must be at least 1, got {params.g}")
    if params.l < 0:
        raise ValidationError(f"loss tolerance must be non-negative, got {params.l}")
    registry.get(UPDATE_FN, params.update_fn_id)
    if params.adaptation_fn_id is not None:
        registry.get(ADAPTATION_FN, params.adaptation_fn_id)


def step(
    model: SystemModel,
    order: Optional[Sequence[int]] = None,
    executor: Optional[Executor] = None,
    registry: Optional[FunctionRegistry] = None,
) -> SystemModel:
    """Advance every entity once, synchronously, from the current snapshot.

    ``order`` is a permutation of the 1-based entity indices giving the
    evaluation order; it never changes the result.
    """
    _require_regime(model, (Regime.METASTABLE, Regime.ACTUAL), "step")
    params = model.params
    local = bind_update(model, registry)
    row = advance(params.milieus, local, model.current.states, model.time_step, order, executor)
    if model.trajectory is None:
        trajectory = Trajectory(rows=(params.entities, Entities(row)))
    else:
        trajectory = replace(model.trajectory, rows=model.trajectory.rows + (Entities(row),))
    return replace(model, regime=Regime.ACTUAL, trajectory=trajectory)


def actualize(
    model: SystemModel,
    t: Optional[int] = None,
    executor: Optional[Executor] = None,
    registry: Optional[FunctionRegistry] = None,
) -> SystemModel:
    _require_regime(model, (Regime.METASTABLE,), "actualize")
    params = model.params
    steps = params.t if t is None else t
    if steps < 1:
        raise PreconditionError(f"t must be at least 1, got {steps}")
    local = bind_update(model, registry)
    rows: List[Entities] = [params.entities]
    snapshot = params.entities.states
    with span("metamodel.actualize", steps=steps, entities=len(snapshot)):
        for t_bar in range(steps):
            snapshot = advance(params.milieus, local, snapshot, t_bar, executor=executor)
            rows.append(Entities(snapshot))
    logger.debug("model_actualized steps=%s entities=%s", steps, len(snapshot))
    return replace(model, regime=Regime.ACTUAL, trajectory=Trajectory(rows=tuple(rows)))


def adapt(model: SystemModel, registry: Optional[FunctionRegistry] = None, **options: Any) -> Any:
    """Run the model's bound adaptation function."""
    _require_regime(model, (Regime.METASTABLE, Regime.ACTUAL), "adapt")
    params = model.params
    if ADAPTATION_FN not in model.declared_operations or params.adaptation_fn_id is None:
        raise BindingError(ADAPTATION_FN, "the model has no adaptation function")
    registry = registry or default_registry()
    definition = registry.get(ADAPTATION_FN, params.adaptation_fn_id)
    logger.info("adaptation_start fn=%s", definition.name)
    return definition.handler(model, **options)


def bind_update(model: SystemModel, registry: Optional[FunctionRegistry] = None) -> LocalUpdate:
    if UPDATE_FN not in model.declared_operations:
        raise BindingError(UPDATE_FN, "the model declares no update function")
    registry = registry or default_registry()
    definition = registry.get(UPDATE_FN, model.params.update_fn_id)
    return definition.handler(model.params)


def advance(
    milieus: Milieus,
    local: LocalUpdate,
    snapshot: Tuple[Any, ...],
    t_bar: int,
    order: Optional[Sequence[int]] = None,
    executor: Optional[Executor] = None,
) -> Tuple[Any, ...]:
    """Compute the next row; every read comes from ``snapshot``."""
    boundary = milieus.boundary_state
    neighbor_lists = milieus.neighbor_lists
    count = len(snapshot)

    def evaluate(position: int) -> Any:
        neighbors = tuple(
            boundary if index == 0 else snapshot[index - 1] for index in neighbor_lists[position]
        )
        try:
            return local(position + 1, snapshot[position], neighbors, t_bar)
        except UndefinedTransitionError as exc:
            raise exc.at(entity=position + 1, time_step=t_bar) from None

    positions = list(range(count)) if order is None else _positions(order, count)
    if executor is not None:
        values = list(executor.map(evaluate, positions))
    else:
        values = [evaluate(position) for position in positions]
    row: List[Any] = [None] * count
    for position, value in zip(positions, values):
        row[position] = value
    return tuple(row)


def _positions(order: Sequence[int], count: int) -> List[int]:
    if sorted(order) != list(range(1, count + 1)):
        raise PreconditionError(f"evaluation order must be a permutation of 1..{count}")
    return [index - 1 for index in order]


def _require_regime(model: SystemModel, allowed: Tuple[Regime, ...], operation: str) -> None:
    if model.regime not in allowed:
        expected = " or ".join(regime.value for regime in allowed)
        raise RegimeError(f"{operation} needs a {expected} model, got {model.regime.value}")


def _check_kinds(kinds: Tuple[str, ...], known: Tuple[str, ...], label: str) -> None:
    if len(set(kinds)) != len(kinds):
        raise ConstraintError(f"duplicate {label} kinds: {kinds}")
    for kind in kinds:
        if kind not in known and not is_extra_kind(kind):
            raise ConstraintError(f"unknown {label} kind {kind!r}")


def _validate_milieus(milieus: Milieus, e: int, params: ConcreteParameters) -> None:
    if milieus.e != e:
        raise ValidationError(f"{milieus.e} milieus for {e} entities")
    phantom = milieus.boundary_state is not None
    if phantom and not params.state_set.contains(milieus.boundary_state):
        raise ValidationError(f"boundary state {milieus.boundary_state!r} is outside the state set")
    for index, neighbors in enumerate(milieus.neighbor_lists, start=1):
        if milieus.uniform_arity is not None and len(neighbors) != milieus.uniform_arity:
            raise ValidationError(
                f"milieu of entity {index} has {len(neighbors)} entries, expected {milieus.uniform_arity}"
            )
        for neighbor in neighbors:
            if neighbor == 0 and phantom:
                continue
            if not 1 <= neighbor <= e:
                raise ValidationError(f"milieu index {neighbor} of entity {index} is outside 1..{e}")
            if neighbor == index:
                raise ValidationError(f"milieu of entity {index} contains the entity itself")


def _validate_rules(params: ConcreteParameters) -> None:
    m = params.milieus.m
    for rule in params.rules.update_rules:
        arity = getattr(rule, "arity", None)
        if arity is not None and m is not None and arity != m + 1:
            raise ValidationError(f"rule table arity {arity} does not fit milieus of size {m}")
        states = getattr(rule, "states", None)
        if states is not None and params.state_set.is_finite:
            if set(states) != set(params.state_set.values):
                raise ValidationError("rule table states differ from the model's state set")


def _check_structure_binding(kind: str, params: ConcreteParameters) -> None:
    if kind == UPDATE_RULES and params.rules.u == 0:
        raise BindingError(kind)
    if kind == ADAPTATION_RULES and params.rules.a == 0:
        raise BindingError(kind)
    if kind == ADAPTATION_END and params.adaptation_end is None:
        raise BindingError(kind)
    if is_extra_kind(kind) and extra_name(kind) not in params.extras:
        raise BindingError(kind)


def _check_operation_binding(kind: str, params: ConcreteParameters, registry: FunctionRegistry) -> None:
    if kind == ADAPTATION_FN and params.adaptation_fn_id is None:
        raise BindingError(kind)
    if is_extra_kind(kind):
        function_id = params.extras.get(extra_name(kind))
        if not isinstance(function_id, str) or not registry.has_any(function_id):
            raise BindingError(kind)
