import json

import pytest

from packages.core.ann.embedding import ann_to_system_model
from packages.core.ann.network import feed_forward_network, ring_threshold_network
from packages.core.ca.automaton import ca_to_system_model, elementary_automaton
from packages.core.ca.rules import canonical_keys, elementary_rule_table
from packages.core.equivalence.checks import (
    EquivalenceConfig,
    check_equivalence,
    check_operational,
    check_structural,
)
from packages.core.equivalence.render import exit_status, render_table, report_to_document
from packages.core.equivalence.report import Conclusion, OperationalStatus, StructuralStatus
from packages.core.metamodel.engine import new_virtual
from packages.core.metamodel.errors import RegimeError
from packages.core.metamodel.models import ENTITIES, UPDATE_FN, AdaptationEnd, StateSet


CELLS = (1, 0, 1, 1)
BINARY = StateSet.finite((0, 1))


def _ca(rule, cells=CELLS):
    return ca_to_system_model(elementary_automaton(rule, cells))


def _majority_net(cells=CELLS):
    return ann_to_system_model(ring_threshold_network(len(cells), 1, (1, 1, 1), 2, units=cells))


def _majority(key):
    return 1 if sum(key) >= 2 else 0


def _verdicts(entries):
    return {entry.kind: entry.verdict for entry in entries}


def test_rule_232_against_threshold_net_is_conditionally_equivalent():
    report = check_equivalence(_ca(232), _majority_net())
    structural = _verdicts(report.structural)
    assert {kind: verdict.status for kind, verdict in structural.items()} == {
        "entities": StructuralStatus.MATCHED,
        "states": StructuralStatus.MATCHED,
        "milieus": StructuralStatus.MATCHED,
    }
    operational = _verdicts(report.operational)
    assert operational["update-fn"].status == OperationalStatus.EXTENSIONALLY_EQUAL
    assert operational["update-fn"].size == 8
    assert not operational["update-fn"].sampled
    assert report.conclusion == Conclusion.CONDITIONALLY_EQUIVALENT
    assert [(entry.kind, entry.verdict.status) for entry in report.conditions] == [
        ("adaptation-fn", OperationalStatus.MISSING_IN_LEFT)
    ]
    assert exit_status(report) == 1


def test_rule_110_against_threshold_net_has_counterexample():
    report = check_equivalence(_ca(110), _majority_net())
    verdict = _verdicts(report.operational)["update-fn"]
    assert verdict.status == OperationalStatus.COUNTEREXAMPLE
    assert (verdict.neighborhood, verdict.left, verdict.right) == ((1, 1, 1), 0, 1)
    assert verdict.entity == 1
    assert report.conclusion == Conclusion.NOT_EQUIVALENT
    assert exit_status(report) == 2


def test_check_operational_on_local_functions():
    table = elementary_rule_table(232)
    verdict = check_operational(table.lookup, _majority, BINARY, 3)
    assert verdict.status == OperationalStatus.EXTENSIONALLY_EQUAL
    assert verdict.size == 8
    counter = check_operational(elementary_rule_table(110).lookup, _majority, BINARY, 3)
    assert (counter.neighborhood, counter.left, counter.right) == ((1, 1, 1), 0, 1)


def test_extensional_equality_means_no_differing_input():
    table = elementary_rule_table(232)
    assert check_operational(table.lookup, _majority, BINARY, 3).status == OperationalStatus.EXTENSIONALLY_EQUAL
    assert all(table.lookup(key) == _majority(key) for key in canonical_keys((0, 1), 3))


@pytest.mark.parametrize("rule", [0, 30, 90, 110, 204, 232])
def test_function_against_itself(rule):
    table = elementary_rule_table(rule)
    verdict = check_operational(table.lookup, table.lookup, BINARY, 3)
    assert verdict.status == OperationalStatus.EXTENSIONALLY_EQUAL


def test_signature_mismatch_is_a_verdict():
    table = elementary_rule_table(30)
    verdict = check_operational(table.lookup, table.lookup, BINARY, 3, right_arity=5)
    assert verdict.status == OperationalStatus.SIGNATURE_MISMATCH
    verdict = check_operational(
        table.lookup, table.lookup, BINARY, 3, right_state_set=StateSet.real_interval(0.0, 1.0)
    )
    assert verdict.status == OperationalStatus.SIGNATURE_MISMATCH


def test_oversized_domains_are_sampled():
    table = elementary_rule_table(232)
    verdict = check_operational(table.lookup, _majority, BINARY, 3, sample_budget=50, enumeration_cap=4)
    assert verdict.status == OperationalStatus.EXTENSIONALLY_EQUAL
    assert verdict.sampled and verdict.size == 50


def test_continuous_functions_compare_within_tolerance():
    interval = StateSet.real_interval(0.0, 1.0)
    verdict = check_operational(sum, lambda key: sum(key) + 1e-12, interval, 2, tolerance=1e-9)
    assert verdict.status == OperationalStatus.EXTENSIONALLY_EQUAL and verdict.sampled
    verdict = check_operational(sum, lambda key: sum(key) + 0.1, interval, 2, tolerance=1e-9)
    assert verdict.status == OperationalStatus.COUNTEREXAMPLE


def test_reflexivity():
    for model in (
        _ca(30),
        _majority_net(),
        ann_to_system_model(feed_forward_network([2, 2, 1], seed=1)),
        ca_to_system_model(elementary_automaton(90, CELLS), adaptation_end=AdaptationEnd((0, 0, 0, 0))),
    ):
        report = check_equivalence(model, model, EquivalenceConfig(sample_budget=50))
        assert report.conclusion == Conclusion.EQUIVALENT


def test_reports_are_mirrored():
    pairs = [
        (_ca(232), _majority_net()),
        (_ca(110), _majority_net()),
        (_ca(30), ann_to_system_model(feed_forward_network([2, 2], seed=0))),
        (_ca(30), _ca(30, cells=(0, 1, 0, 1, 1))),
    ]
    for left, right in pairs:
        cfg = EquivalenceConfig(sample_budget=20)
        forward = check_equivalence(left, right, cfg)
        backward = check_equivalence(right, left, cfg)
        assert backward == forward.mirrored()
        assert backward.conclusion == forward.conclusion


def test_finite_against_continuous_states():
    report = check_equivalence(_ca(30), ann_to_system_model(feed_forward_network([2, 2], seed=0)))
    states = _verdicts(report.structural)["states"]
    assert states.status == StructuralStatus.MISMATCHED
    assert (states.aspect, states.left, states.right) == ("kind", "finite", "real-interval")
    assert report.conclusion == Conclusion.NOT_EQUIVALENT


def test_entity_count_mismatch():
    entries = check_structural(_ca(30), _ca(30, cells=(0, 1, 0, 1, 1)))
    entities = _verdicts(entries)["entities"]
    assert entities.status == StructuralStatus.MISMATCHED
    assert (entities.aspect, entities.left, entities.right) == ("count", 4, 5)


def test_report_lists_every_kind_once():
    end = AdaptationEnd((0, 0, 0, 0))
    adaptive = ca_to_system_model(elementary_automaton(232, CELLS), adaptation_end=end)
    report = check_equivalence(adaptive, _majority_net())
    kinds = [entry.kind for entry in report.structural]
    assert kinds == ["entities", "states", "milieus", "adaptation-end"]
    assert [entry.kind for entry in report.operational] == ["update-fn", "adaptation-fn"]
    assert _verdicts(report.operational)["adaptation-fn"].status == OperationalStatus.SIGNATURE_MISMATCH


def test_virtual_models_are_rejected():
    with pytest.raises(RegimeError):
        check_structural(new_virtual((ENTITIES,), (UPDATE_FN,)), _ca(30))


def test_rendering():
    report = check_equivalence(_ca(232), _majority_net())
    table = render_table(report)
    assert "extensionally-equal(8)" in table
    assert table.endswith("conclusion: conditionally-equivalent [adaptation-fn missing-in-left]\n")
    document = report_to_document(report)
    assert document["conclusion"] == "conditionally-equivalent"
    assert document["conditions"] == [{"kind": "adaptation-fn", "verdict": "missing-in-left"}]
    json.dumps(document)
