from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..ca.rules import canonical_keys
from ..config import EngineSettings
from ..metamodel.engine import bind_update, split_neighborhood
from ..metamodel.errors import RegimeError
from ..metamodel.models import (
    ADAPTATION_END,
    ADAPTATION_RULES,
    ENTITIES,
    MILIEUS,
    OPERATION_KINDS,
    STATES,
    STRUCTURE_KINDS,
    UPDATE_FN,
    UPDATE_RULES,
    Regime,
    StateSet,
    SystemModel,
    extra_name,
    is_extra_kind,
)
from ..tracing import span
from .report import (
    EquivalenceReport,
    OperationalStatus,
    OperationalVerdict,
    ReportEntry,
    StructuralStatus,
    StructuralVerdict,
)


logger = logging.getLogger(__name__)

# neighbourhood key (left milieu, own, right milieu) -> next state
KeyFunction = Callable[[Tuple[Any, ...]], Any]


@dataclass(frozen=True)
class EquivalenceConfig:
    tolerance: float = 1e-9
    sample_budget: int = 1000
    seed: int = 0
    enumeration_cap: int = 2 ** 20
    workers: int = 1

    @classmethod
    def from_settings(cls, settings: EngineSettings, seed: int = 0) -> "EquivalenceConfig":
        return cls(
            tolerance=settings.tolerance,
            sample_budget=settings.sample_budget,
            seed=seed,
            enumeration_cap=settings.enumeration_cap,
            workers=settings.workers,
        )


def check_structural(left: SystemModel, right: SystemModel) -> Tuple[ReportEntry, ...]:
    """Compare structure kinds declared by either model, in canonical kind order."""
    _require_concrete(left, "left")
    _require_concrete(right, "right")
    entries = []
    for kind in _ordered_kinds(left.declared_structures, right.declared_structures, STRUCTURE_KINDS):
        in_left, in_right = kind in left.declared_structures, kind in right.declared_structures
        if not in_left:
            verdict = StructuralVerdict(StructuralStatus.MISSING_IN_LEFT)
        elif not in_right:
            verdict = StructuralVerdict(StructuralStatus.MISSING_IN_RIGHT)
        else:
            verdict = _compare_structure(kind, left, right)
        entries.append(ReportEntry(kind, verdict))
    return tuple(entries)


def check_operational(
    left_fn: KeyFunction,
    right_fn: KeyFunction,
    state_set: StateSet,
    arity: int,
    tolerance: float = 1e-9,
    sample_budget: int = 1000,
    seed: int = 0,
    enumeration_cap: int = 2 ** 20,
    right_state_set: Optional[StateSet] = None,
    right_arity: Optional[int] = None,
    workers: int = 1,
) -> OperationalVerdict:
    """Compare two local functions over neighbourhood keys.

    Finite domains within ``enumeration_cap`` are enumerated in canonical key
    order and the first differing key is reported; anything else is sampled
    from ``seed`` and the verdict says so.
    """
    right_state_set = state_set if right_state_set is None else right_state_set
    right_arity = arity if right_arity is None else right_arity
    if arity != right_arity:
        return OperationalVerdict(
            OperationalStatus.SIGNATURE_MISMATCH, detail="arity", left=arity, right=right_arity
        )
    if not state_set.same_extension(right_state_set):
        return OperationalVerdict(
            OperationalStatus.SIGNATURE_MISMATCH,
            detail="state-set",
            left=_describe_states(state_set),
            right=_describe_states(right_state_set),
        )
    size = state_set.k ** arity if state_set.is_finite else None
    if size is not None and size <= enumeration_cap:
        keys: Iterable[Tuple[Any, ...]] = canonical_keys(_canonical_states(state_set.values), arity)
        sampled = False
    else:
        keys = _sample_keys(state_set, arity, sample_budget, seed)
        size = sample_budget
        sampled = True
    keys = list(keys)

    def evaluate(key: Tuple[Any, ...]) -> Tuple[Any, Any]:
        return left_fn(key), right_fn(key)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(evaluate, keys))
    else:
        outputs = [evaluate(key) for key in keys]
    for key, (left_value, right_value) in zip(keys, outputs):
        if not _equal(left_value, right_value, tolerance):
            return OperationalVerdict(
                OperationalStatus.COUNTEREXAMPLE,
                neighborhood=key,
                left=left_value,
                right=right_value,
                sampled=sampled,
            )
    return OperationalVerdict(OperationalStatus.EXTENSIONALLY_EQUAL, size=size, sampled=sampled)


def check_equivalence(
    left: SystemModel,
    right: SystemModel,
    cfg: Optional[EquivalenceConfig] = None,
) -> EquivalenceReport:
    cfg = cfg or EquivalenceConfig()
    with span("equivalence.check", seed=cfg.seed):
        structural = check_structural(left, right)
        operational = []
        for kind in _ordered_kinds(left.declared_operations, right.declared_operations, OPERATION_KINDS):
            in_left, in_right = kind in left.declared_operations, kind in right.declared_operations
            if not in_left:
                verdict = OperationalVerdict(OperationalStatus.MISSING_IN_LEFT)
            elif not in_right:
                verdict = OperationalVerdict(OperationalStatus.MISSING_IN_RIGHT)
            elif kind == UPDATE_FN:
                verdict = _compare_update_functions(left, right, cfg)
            else:
                verdict = _compare_bindings(kind, left, right)
            operational.append(ReportEntry(kind, verdict))
        report = EquivalenceReport(structural=structural, operational=tuple(operational))
    logger.info(
        "equivalence_checked conclusion=%s conditions=%s",
        report.conclusion.value,
        [entry.kind for entry in report.conditions],
    )
    return report


def _require_concrete(model: SystemModel, side: str) -> None:
    if model.regime == Regime.VIRTUAL:
        raise RegimeError(f"the {side} model is virtual; equivalence needs concrete parameters")


def _ordered_kinds(left: Sequence[str], right: Sequence[str], known: Tuple[str, ...]) -> List[str]:
    present = set(left) | set(right)
    ordered = [kind for kind in known if kind in present]
    return ordered + sorted(kind for kind in present if kind not in known)


def _compare_structure(kind: str, left: SystemModel, right: SystemModel) -> StructuralVerdict:
    lp, rp = left.params, right.params
    if kind == ENTITIES:
        return _same("count", lp.entities.e, rp.entities.e)
    if kind == STATES:
        return _compare_state_sets(lp.state_set, rp.state_set)
    if kind == MILIEUS:
        return _compare_milieus(lp.milieus.neighbor_lists, rp.milieus.neighbor_lists)
    if kind == UPDATE_RULES:
        return _same("count", lp.rules.u, rp.rules.u)
    if kind == ADAPTATION_RULES:
        return _same("count", lp.rules.a, rp.rules.a)
    if kind == ADAPTATION_END:
        left_end, right_end = lp.adaptation_end, rp.adaptation_end
        verdict = _same("count", left_end.p, right_end.p)
        if verdict.status != StructuralStatus.MATCHED:
            return verdict
        return _same("scope", left_end.scope.value, right_end.scope.value)
    if is_extra_kind(kind):
        name = extra_name(kind)
        return _same("type", type(lp.extras.get(name)).__name__, type(rp.extras.get(name)).__name__)
    return StructuralVerdict(StructuralStatus.MATCHED)


def _same(aspect: str, left: Any, right: Any) -> StructuralVerdict:
    if left == right:
        return StructuralVerdict(StructuralStatus.MATCHED)
    return StructuralVerdict(StructuralStatus.MISMATCHED, aspect=aspect, left=left, right=right)


def _compare_state_sets(left: StateSet, right: StateSet) -> StructuralVerdict:
    if left.kind != right.kind:
        return StructuralVerdict(StructuralStatus.MISMATCHED, "kind", left.kind.value, right.kind.value)
    if left.same_extension(right):
        return StructuralVerdict(StructuralStatus.MATCHED)
    if left.is_finite:
        return StructuralVerdict(
            StructuralStatus.MISMATCHED,
            "values",
            list(_canonical_states(left.values)),
            list(_canonical_states(right.values)),
        )
    return StructuralVerdict(StructuralStatus.MISMATCHED, "bounds", [left.lo, left.hi], [right.lo, right.hi])


def _compare_milieus(
    left: Tuple[Tuple[int, ...], ...], right: Tuple[Tuple[int, ...], ...]
) -> StructuralVerdict:
    if len(left) != len(right):
        return StructuralVerdict(StructuralStatus.MISMATCHED, "count", len(left), len(right))
    for index, (left_milieu, right_milieu) in enumerate(zip(left, right), start=1):
        if tuple(left_milieu) != tuple(right_milieu):
            return StructuralVerdict(
                StructuralStatus.MISMATCHED, f"milieu {index}", list(left_milieu), list(right_milieu)
            )
    return StructuralVerdict(StructuralStatus.MATCHED)


def _compare_update_functions(
    left: SystemModel, right: SystemModel, cfg: EquivalenceConfig
) -> OperationalVerdict:
    """Entity by entity, since an update function may depend on the entity's index."""
    lp, rp = left.params, right.params
    if lp.entities.e != rp.entities.e:
        return OperationalVerdict(
            OperationalStatus.SIGNATURE_MISMATCH, detail="entities", left=lp.entities.e, right=rp.entities.e
        )
    left_local, right_local = bind_update(left), bind_update(right)
    arities = set()
    checked = 0
    verdict = OperationalVerdict(OperationalStatus.EXTENSIONALLY_EQUAL)
    for index in range(1, lp.entities.e + 1):
        left_arity = len(lp.milieus.neighbor_lists[index - 1]) + 1
        right_arity = len(rp.milieus.neighbor_lists[index - 1]) + 1
        verdict = check_operational(
            _key_function(left_local, index),
            _key_function(right_local, index),
            lp.state_set,
            left_arity,
            tolerance=cfg.tolerance,
            sample_budget=cfg.sample_budget,
            seed=cfg.seed,
            enumeration_cap=cfg.enumeration_cap,
            right_state_set=rp.state_set,
            right_arity=right_arity,
            workers=cfg.workers,
        )
        if verdict.status != OperationalStatus.EXTENSIONALLY_EQUAL:
            if verdict.status == OperationalStatus.COUNTEREXAMPLE:
                return OperationalVerdict(
                    verdict.status,
                    neighborhood=verdict.neighborhood,
                    entity=index,
                    left=verdict.left,
                    right=verdict.right,
                    sampled=verdict.sampled,
                )
            return verdict
        arities.add(left_arity)
        checked += verdict.size
    size = verdict.size if len(arities) == 1 else checked
    return OperationalVerdict(OperationalStatus.EXTENSIONALLY_EQUAL, size=size, sampled=verdict.sampled)


def _compare_bindings(kind: str, left: SystemModel, right: SystemModel) -> OperationalVerdict:
    left_id, right_id = _binding_id(kind, left), _binding_id(kind, right)
    if left_id == right_id:
        return OperationalVerdict(OperationalStatus.SAME_BINDING, detail=left_id)
    return OperationalVerdict(
        OperationalStatus.SIGNATURE_MISMATCH, detail="binding", left=left_id, right=right_id
    )


def _binding_id(kind: str, model: SystemModel) -> Optional[str]:
    if is_extra_kind(kind):
        return model.params.extras.get(extra_name(kind))
    return model.params.adaptation_fn_id


def _key_function(local: Callable[..., Any], index: int) -> KeyFunction:
    def evaluate(key: Tuple[Any, ...]) -> Any:
        own, neighbors = split_neighborhood(key)
        return local(index, own, neighbors, 0)

    return evaluate


def _canonical_states(values: Sequence[Any]) -> Tuple[Any, ...]:
    try:
        return tuple(sorted(values))
    except TypeError:
        return tuple(sorted(values, key=repr))


def _sample_keys(state_set: StateSet, arity: int, budget: int, seed: int) -> List[Tuple[Any, ...]]:
    rng = np.random.default_rng(seed)
    if state_set.is_finite:
        states = _canonical_states(state_set.values)
        picks = rng.integers(0, len(states), size=(budget, arity))
        return [tuple(states[int(pick)] for pick in row) for row in picks]
    draws = rng.uniform(state_set.lo, state_set.hi, size=(budget, arity))
    return [tuple(float(value) for value in row) for row in draws]


def _equal(left: Any, right: Any, tolerance: float) -> bool:
    numeric = (int, float, np.integer, np.floating)
    if isinstance(left, numeric) and isinstance(right, numeric) and not isinstance(left, bool):
        return abs(float(left) - float(right)) <= tolerance
    return left == right


def _describe_states(state_set: StateSet) -> Any:
    if state_set.is_finite:
        return list(_canonical_states(state_set.values))
    return [state_set.lo, state_set.hi]
