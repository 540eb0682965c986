from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..ca.rules import RuleTable
from ..metamodel.engine import actualize
from ..metamodel.errors import BindingError, CapabilityError, PreconditionError, RegimeError
from ..metamodel.loss import loss
from ..metamodel.models import (
    ADAPTATION_END,
    AdaptationEnd,
    AdaptationRecord,
    ComparisonScope,
    Regime,
    SystemModel,
)
from ..tracing import span
from .config import AdaptationConfig, SearchStrategy, validate_config


logger = logging.getLogger(__name__)

AdaptationLog = Tuple[AdaptationRecord, ...]


def evolve_rules(
    model: SystemModel,
    end: Optional[AdaptationEnd] = None,
    cfg: Optional[AdaptationConfig] = None,
    t: Optional[int] = None,
) -> Tuple[SystemModel, AdaptationLog]:
    """Search the model's rule table for one whose final row after ``t`` steps matches ``end``.

    Only the update rules change; the initial states and milieus stay put.
    The returned model is metastable and carries the best table found.
    """
    cfg = cfg or AdaptationConfig()
    validate_config(cfg)
    table, end, steps = _check_inputs(model, end, t)
    evaluate = _evaluator(model, table, end, steps)
    with span(
        "adaptation.evolve_rules",
        strategy=cfg.strategy.value,
        g=cfg.g,
        seed=cfg.seed,
        steps=steps,
    ):
        if cfg.strategy == SearchStrategy.EXHAUSTIVE:
            best, log = _exhaustive(table, evaluate, cfg)
        else:
            best, log = _hill_climb(table, evaluate, cfg)
    logger.info(
        "evolve_rules_done strategy=%s iterations=%s best_loss=%s best=%s",
        cfg.strategy.value,
        len(log),
        min(record.loss for record in log),
        best.label(),
    )
    return _with_table(model, best, end), log


def evolve_model(
    model: SystemModel,
    end: Optional[AdaptationEnd] = None,
    cfg: Optional[AdaptationConfig] = None,
    t: Optional[int] = None,
) -> Tuple[SystemModel, AdaptationLog]:
    """Adaptation-function entry point: g and l default to the model's own parameters."""
    if cfg is None:
        params = model.params
        cfg = AdaptationConfig(g=params.g, l=params.l) if params is not None else AdaptationConfig()
    return evolve_rules(model, end=end, cfg=cfg, t=t)


def _check_inputs(
    model: SystemModel, end: Optional[AdaptationEnd], t: Optional[int]
) -> Tuple[RuleTable, AdaptationEnd, int]:
    if model.regime != Regime.METASTABLE:
        raise RegimeError(f"evolve_rules needs a metastable model, got {model.regime.value}")
    params = model.params
    if not params.state_set.is_finite:
        raise CapabilityError("rule evolution needs a finite state set")
    if params.state_set.k < 2:
        raise CapabilityError("rule evolution needs at least two states to mutate between")
    rules = params.rules.update_rules
    if not rules or not isinstance(rules[0], RuleTable):
        raise CapabilityError("rule evolution needs an explicit rule table")
    end = end if end is not None else params.adaptation_end
    if end is None:
        raise BindingError(ADAPTATION_END, "rule evolution needs an adaptation end")
    if end.scope != ComparisonScope.FINAL_STATE:
        raise CapabilityError(f"adaptation end scope {end.scope.value} is not supported")
    steps = params.t if t is None else t
    if steps < 1:
        raise PreconditionError(f"t must be at least 1, got {steps}")
    return rules[0], end, steps


def _evaluator(
    model: SystemModel, start: RuleTable, end: AdaptationEnd, steps: int
) -> Callable[[RuleTable], float]:
    state_set = model.params.state_set

    def evaluate(table: RuleTable) -> float:
        candidate = model if table is start else _with_table(model, table, end)
        final = actualize(candidate, steps).current
        return loss(final, end, state_set)

    return evaluate


def _with_table(model: SystemModel, table: RuleTable, end: AdaptationEnd) -> SystemModel:
    params = model.params
    structures = model.declared_structures
    if ADAPTATION_END not in structures:
        structures = structures + (ADAPTATION_END,)
    rules = replace(params.rules, update_rules=(table,) + tuple(params.rules.update_rules[1:]))
    return replace(
        model,
        regime=Regime.METASTABLE,
        declared_structures=structures,
        params=replace(params, rules=rules, adaptation_end=end),
        trajectory=None,
    )


def _hill_climb(
    start: RuleTable, evaluate: Callable[[RuleTable], float], cfg: AdaptationConfig
) -> Tuple[RuleTable, AdaptationLog]:
    rng = np.random.default_rng(cfg.seed)
    keys = list(start.entries)
    flips = min(cfg.entries_per_mutation, len(keys))
    best, best_loss = start, evaluate(start)
    log: List[AdaptationRecord] = [AdaptationRecord(0, best_loss, True, start.label())]
    iteration = 0
    while best_loss > cfg.l and iteration < cfg.g:
        iteration += 1
        candidate = mutate(best, keys, flips, rng)
        candidate_loss = evaluate(candidate)
        accepted = candidate_loss < best_loss
        log.append(AdaptationRecord(iteration, candidate_loss, accepted, candidate.label()))
        if accepted:
            best, best_loss = candidate, candidate_loss
            logger.debug("evolve_rules_accept iteration=%s loss=%s", iteration, best_loss)
    return best, tuple(log)


def mutate(
    table: RuleTable,
    keys: Sequence[tuple],
    flips: int,
    rng: np.random.Generator,
) -> RuleTable:
    """Reassign ``flips`` distinct entries to a different state each."""
    entries = dict(table.entries)
    for position in rng.choice(len(keys), size=flips, replace=False):
        key = keys[int(position)]
        alternatives = [state for state in table.states if state != entries[key]]
        entries[key] = alternatives[int(rng.integers(len(alternatives)))]
    return RuleTable(states=table.states, arity=table.arity, entries=entries)


def _exhaustive(
    start: RuleTable, evaluate: Callable[[RuleTable], float], cfg: AdaptationConfig
) -> Tuple[RuleTable, AdaptationLog]:
    k, arity = start.k, start.arity
    count = k ** (k ** arity)
    if count > cfg.exhaustive_limit:
        raise CapabilityError(
            f"exhaustive search over {count} rule tables exceeds the limit of {cfg.exhaustive_limit}"
        )
    tables = [RuleTable.from_number(number, start.states, arity) for number in range(count)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            losses = list(pool.map(evaluate, tables))
    else:
        losses = [evaluate(table) for table in tables]
    best: Optional[RuleTable] = None
    best_loss = float("inf")
    log: List[AdaptationRecord] = []
    for iteration, (table, table_loss) in enumerate(zip(tables, losses), start=1):
        accepted = table_loss < best_loss
        if accepted:
            best, best_loss = table, table_loss
        log.append(AdaptationRecord(iteration, table_loss, accepted, table.label()))
    return best, tuple(log)
