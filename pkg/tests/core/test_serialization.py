import json

import pytest

from packages.core.ann.embedding import ann_to_system_model
from packages.core.ann.network import feed_forward_network, ring_threshold_network
from packages.core.ca.automaton import ca_to_system_model, elementary_automaton
from packages.core.ca.rules import RuleTable
from packages.core.metamodel.engine import actualize, concretize, new_virtual
from packages.core.metamodel.errors import FormatError
from packages.core.metamodel.models import (
    ENTITIES,
    MILIEUS,
    STATES,
    UPDATE_FN,
    UPDATE_RULES,
    AdaptationEnd,
    ConcreteParameters,
    Entities,
    Milieus,
    RuleSet,
    StateSet,
    Trajectory,
)
from packages.core.metamodel.serialization import (
    format_trajectory,
    load_model,
    model_from_document,
    model_to_document,
    parse_state_line,
    parse_trajectory,
    read_trajectory,
    save_model,
    write_trajectory,
)


def test_ca_model_round_trip(tmp_path):
    end = AdaptationEnd(targets=(0, 0, 0, 0, 0))
    model = ca_to_system_model(
        elementary_automaton(110, (0, 1, 1, 0, 1), boundary="fixed"), steps=4, adaptation_end=end, g=20
    )
    path = tmp_path / "model.json"
    save_model(model, str(path))
    assert load_model(str(path)) == model
    document = json.loads(path.read_text())
    assert document["regime"] == "metastable"
    assert document["structures"]["update_rules"] == ["wolfram:110"]
    assert document["params"] == {"t": 4, "g": 20, "l": 0.0}


def test_actual_model_round_trip(tmp_path):
    model = actualize(ca_to_system_model(elementary_automaton(30, (0, 0, 1, 0, 0)), steps=3))
    path = tmp_path / "actual.json"
    save_model(model, str(path))
    assert load_model(str(path)) == model


def test_partial_rule_table_round_trip():
    table = RuleTable.from_entries((0, 1), 3, {(1, 1, 1): 0, (0, 0, 0): 1})
    params = ConcreteParameters(
        entities=Entities((0, 0, 0)),
        state_set=StateSet.finite((0, 1)),
        milieus=Milieus(neighbor_lists=((3, 2), (1, 3), (2, 1))),
        rules=RuleSet(update_rules=(table,)),
    )
    model = concretize(new_virtual((ENTITIES, STATES, MILIEUS, UPDATE_RULES), (UPDATE_FN,)), params)
    document = model_to_document(model)
    assert document["structures"]["update_rules"] == ["111 -> 0\n000 -> 1"]
    assert model_from_document(document) == model


def test_network_models_round_trip(tmp_path):
    for net in (feed_forward_network([2, 3, 1], seed=4), ring_threshold_network(5, 1, (1, 1, 1), 2)):
        model = ann_to_system_model(net)
        path = tmp_path / "net.json"
        save_model(model, str(path))
        assert load_model(str(path)) == model


def test_virtual_model_round_trip():
    model = new_virtual((ENTITIES, STATES), (UPDATE_FN,))
    assert model_from_document(model_to_document(model)) == model


def test_malformed_documents(tmp_path):
    with pytest.raises(FormatError):
        model_from_document({"regime": "dormant", "declared": {"structures": [], "operations": []}})
    document = model_to_document(ca_to_system_model(elementary_automaton(30, (0, 1, 0))))
    document["structures"]["entities"] = [0, 5, 0]
    with pytest.raises(FormatError):
        model_from_document(document)
    del document["params"]
    with pytest.raises(FormatError):
        model_from_document(document)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(FormatError):
        load_model(str(broken))


def test_trajectory_file_format(tmp_path):
    model = actualize(ca_to_system_model(elementary_automaton(90, (0, 0, 1, 0, 0)), steps=2))
    text = format_trajectory(model.trajectory, model.params.state_set)
    assert text == "# e=5 k=2 t=2\n0 0 1 0 0\n0 1 0 1 0\n1 0 0 0 1\n"
    path = tmp_path / "run.txt"
    write_trajectory(model.trajectory, model.params.state_set, str(path))
    assert read_trajectory(str(path)) == model.trajectory
    assert parse_state_line(text) == (1, 0, 0, 0, 1)


def test_continuous_trajectory_uses_repr():
    trajectory = Trajectory(rows=(Entities((0.1, 0.25)), Entities((0.5, 1.0))))
    text = format_trajectory(trajectory, StateSet.real_interval(0.0, 1.0))
    assert text.splitlines()[0] == "# e=2 k=inf t=1"
    assert parse_trajectory(text) == trajectory


def test_trajectory_header_must_match_body():
    with pytest.raises(FormatError):
        parse_trajectory("# e=3 k=2 t=1\n0 1 0\n")
    with pytest.raises(FormatError):
        parse_trajectory("0 1 0\n")


def test_undecodable_files_are_format_errors(tmp_path):
    path = tmp_path / "latin.json"
    path.write_bytes(b'{"regime": "\xff\xfe"}')
    with pytest.raises(FormatError):
        load_model(str(path))
    trajectory = tmp_path / "latin.txt"
    trajectory.write_bytes(b"# e=1 k=2 t=0\n\xff\n")
    with pytest.raises(FormatError):
        read_trajectory(str(trajectory))


def test_loading_checks_declared_kinds():
    document = model_to_document(ca_to_system_model(elementary_automaton(30, (0, 1, 0))))
    document["declared"]["structures"].append("weather")
    with pytest.raises(FormatError):
        model_from_document(document)


def test_loading_checks_declared_bindings():
    table = RuleTable.from_entries((0, 1), 3, {(0, 0, 0): 1})
    params = ConcreteParameters(
        entities=Entities((0, 0, 0)),
        state_set=StateSet.finite((0, 1)),
        milieus=Milieus(neighbor_lists=((3, 2), (1, 3), (2, 1))),
        rules=RuleSet(update_rules=(table,)),
    )
    model = concretize(new_virtual((ENTITIES, STATES, MILIEUS, UPDATE_RULES), (UPDATE_FN,)), params)
    document = model_to_document(model)
    document["structures"]["update_rules"] = []
    with pytest.raises(FormatError):
        model_from_document(document)
