from __future__ import annotations

import json
import re
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field
from pydantic import ValidationError as SchemaError

from .errors import FormatError, MetamodelError
from .models import (
    AdaptationEnd,
    AdaptationRecord,
    ComparisonScope,
    ConcreteParameters,
    Entities,
    Milieus,
    Regime,
    RuleSet,
    StateSet,
    StateSetKind,
    SystemModel,
    Trajectory,
)


class StateSetDocument(BaseModel):
    kind: Literal["finite", "real-interval"]
    values: Optional[List[Any]] = None
    lo: Optional[float] = None
    hi: Optional[float] = None


class AdaptationEndDocument(BaseModel):
    targets: List[Any]
    scope: Literal["final-state", "trajectory-row"] = "final-state"


class StructuresDocument(BaseModel):
    entities: List[Any]
    states: StateSetDocument
    milieus: List[List[int]]
    milieu_arity: Optional[int] = None
    boundary_state: Optional[Any] = None
    update_rules: List[str] = Field(default_factory=list)
    adaptation_rules: List[Any] = Field(default_factory=list)
    adaptation_end: Optional[AdaptationEndDocument] = None
    extras: Dict[str, Any] = Field(default_factory=dict)


class OperationsDocument(BaseModel):
    update_fn: str
    adaptation_fn: Optional[str] = None


class ParamsDocument(BaseModel):
    t: int
    g: int = 1
    l: float = 0.0


class DeclaredDocument(BaseModel):
    structures: List[str]
    operations: List[str]


class TrajectoryDocument(BaseModel):
    rows: List[List[Any]]
    adaptation_log: List[List[Any]] = Field(default_factory=list)


class ModelDocument(BaseModel):
    regime: Literal["virtual", "metastable", "actual"]
    declared: DeclaredDocument
    structures: Optional[StructuresDocument] = None
    operations: Optional[OperationsDocument] = None
    params: Optional[ParamsDocument] = None
    bindings: Dict[str, Any] = Field(default_factory=dict)
    trajectory: Optional[TrajectoryDocument] = None


def state_set_to_document(state_set: StateSet) -> Dict[str, Any]:
    if state_set.is_finite:
        return {"kind": StateSetKind.FINITE.value, "values": list(state_set.values)}
    return {"kind": StateSetKind.REAL_INTERVAL.value, "lo": state_set.lo, "hi": state_set.hi}


def state_set_from_document(document: StateSetDocument) -> StateSet:
    if document.kind == StateSetKind.FINITE.value:
        if document.values is None:
            raise FormatError("a finite state set needs its values")
        return StateSet.finite(tuple(document.values))
    if document.lo is None or document.hi is None:
        raise FormatError("a real-interval state set needs lo and hi")
    return StateSet.real_interval(document.lo, document.hi)


def model_to_document(model: SystemModel) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "regime": model.regime.value,
        "declared": {
            "structures": list(model.declared_structures),
            "operations": list(model.declared_operations),
        },
    }
    params = model.params
    if params is not None:
        document["structures"] = _structures_to_document(params)
        document["operations"] = {
            "update_fn": params.update_fn_id,
            "adaptation_fn": params.adaptation_fn_id,
        }
        document["params"] = {"t": params.t, "g": params.g, "l": params.l}
        document["bindings"] = _bindings_to_document(params.bindings)
    if model.trajectory is not None:
        document["trajectory"] = {
            "rows": [list(row.states) for row in model.trajectory.rows],
            "adaptation_log": [
                [record.iteration, record.loss, record.accepted, record.label]
                for record in model.trajectory.adaptation_log
            ],
        }
    return document


def model_from_document(raw: Dict[str, Any]) -> SystemModel:
    from .engine import check_bindings, check_declarations, validate_parameters

    try:
        document = ModelDocument.model_validate(raw)
    except SchemaError as exc:
        raise FormatError(f"malformed model document: {exc}") from exc
    structures = tuple(document.declared.structures)
    operations = tuple(document.declared.operations)
    try:
        check_declarations(structures, operations)
    except MetamodelError as exc:
        raise FormatError(f"invalid model declarations: {exc}") from exc
    regime = Regime(document.regime)
    params = None
    if regime != Regime.VIRTUAL:
        if document.structures is None or document.operations is None or document.params is None:
            raise FormatError(f"a {regime.value} model needs structures, operations and params")
        params = _params_from_document(document)
        try:
            validate_parameters(params)
            check_bindings(structures, operations, params)
        except MetamodelError as exc:
            raise FormatError(f"invalid model parameters: {exc}") from exc
    trajectory = None
    if document.trajectory is not None:
        trajectory = Trajectory(
            rows=tuple(Entities(tuple(row)) for row in document.trajectory.rows),
            adaptation_log=tuple(_record(entry) for entry in document.trajectory.adaptation_log),
        )
    if (regime == Regime.ACTUAL) != (trajectory is not None):
        raise FormatError("exactly the actual regime carries a trajectory")
    return SystemModel(
        regime=regime,
        declared_structures=structures,
        declared_operations=operations,
        params=params,
        trajectory=trajectory,
    )


def dumps_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2) + "\n"


def save_model(model: SystemModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_document(model_to_document(model)))


def read_text(path: str) -> str:
    with open(path, "rb") as handle:
        data = handle.read()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path} is not UTF-8 text: {exc}") from exc


def load_model(path: str) -> SystemModel:
    text = read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError(f"{path} does not hold a model object")
    return model_from_document(raw)


def format_state(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


_INT_PATTERN = re.compile(r"^[+-]?\d+$")


def parse_state(token: str) -> Any:
    if _INT_PATTERN.match(token):
        return int(token)
    try:
        return float(token)
    except ValueError:
        return token


def format_trajectory(trajectory: Trajectory, state_set: StateSet) -> str:
    k = state_set.k if state_set.is_finite else "inf"
    e = len(trajectory.rows[0].states)
    lines = [f"# e={e} k={k} t={trajectory.t_bar}"]
    lines.extend(" ".join(format_state(value) for value in row.states) for row in trajectory.rows)
    return "\n".join(lines) + "\n"


def parse_trajectory(text: str) -> Trajectory:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FormatError("trajectory files start with a '# e=<e> k=<k> t=<t>' header")
    header = dict(part.split("=", 1) for part in lines[0][1:].split() if "=" in part)
    try:
        e, t = int(header["e"]), int(header["t"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad trajectory header {lines[0]!r}") from exc
    rows = tuple(Entities(tuple(parse_state(token) for token in line.split())) for line in lines[1:])
    if len(rows) != t + 1 or any(len(row.states) != e for row in rows):
        raise FormatError(f"trajectory body does not match its header e={e} t={t}")
    return Trajectory(rows=rows)


def parse_state_line(text: str) -> Tuple[Any, ...]:
    """States of the last non-comment line; accepts a bare row or a trajectory file."""
    rows = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows:
        raise FormatError("no state line found")
    return tuple(parse_state(token) for token in rows[-1].split())


def write_trajectory(trajectory: Trajectory, state_set: StateSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_trajectory(trajectory, state_set))


def read_trajectory(path: str) -> Trajectory:
    return parse_trajectory(read_text(path))


def _structures_to_document(params: ConcreteParameters) -> Dict[str, Any]:
    from ..ca.rules import RuleTable, format_rule_table

    update_rules = []
    for rule in params.rules.update_rules:
        if not isinstance(rule, RuleTable):
            raise FormatError(f"cannot serialise update rule of type {type(rule).__name__}")
        update_rules.append(format_rule_table(rule))
    end = params.adaptation_end
    return {
        "entities": list(params.entities.states),
        "states": state_set_to_document(params.state_set),
        "milieus": [list(neighbors) for neighbors in params.milieus.neighbor_lists],
        "milieu_arity": params.milieus.uniform_arity,
        "boundary_state": params.milieus.boundary_state,
        "update_rules": update_rules,
        "adaptation_rules": list(params.rules.adaptation_rules),
        "adaptation_end": (
            {"targets": list(end.targets), "scope": end.scope.value} if end is not None else None
        ),
        "extras": dict(params.extras),
    }


def _params_from_document(document: ModelDocument) -> ConcreteParameters:
    from ..ca.rules import parse_rule_table

    structures = document.structures
    state_set = state_set_from_document(structures.states)
    milieus = Milieus(
        neighbor_lists=tuple(tuple(neighbors) for neighbors in structures.milieus),
        uniform_arity=structures.milieu_arity,
        boundary_state=structures.boundary_state,
    )
    update_rules = []
    if structures.update_rules:
        m = milieus.m
        if m is None or not state_set.is_finite:
            raise FormatError("rule tables need a finite state set and milieus of uniform size")
        update_rules = [parse_rule_table(text, state_set.values, m + 1) for text in structures.update_rules]
    end = None
    if structures.adaptation_end is not None:
        end = AdaptationEnd(
            targets=tuple(structures.adaptation_end.targets),
            scope=ComparisonScope(structures.adaptation_end.scope),
        )
    return ConcreteParameters(
        entities=Entities(tuple(structures.entities)),
        state_set=state_set,
        milieus=milieus,
        rules=RuleSet(
            update_rules=tuple(update_rules),
            adaptation_rules=tuple(structures.adaptation_rules),
        ),
        adaptation_end=end,
        update_fn_id=document.operations.update_fn,
        adaptation_fn_id=document.operations.adaptation_fn,
        t=document.params.t,
        g=document.params.g,
        l=document.params.l,
        bindings=_bindings_from_document(document.bindings),
        extras=dict(structures.extras),
    )


def _bindings_to_document(bindings: Dict[str, Any]) -> Dict[str, Any]:
    from ..ann.files import network_to_document
    from ..ann.network import NeuralNetwork

    document = {}
    for name, value in bindings.items():
        if isinstance(value, NeuralNetwork):
            document[name] = network_to_document(value)
        else:
            document[name] = value
    return document


def _bindings_from_document(raw: Dict[str, Any]) -> Dict[str, Any]:
    from ..ann.embedding import NETWORK_BINDING
    from ..ann.files import network_from_document

    bindings = dict(raw)
    if NETWORK_BINDING in bindings:
        bindings[NETWORK_BINDING] = network_from_document(bindings[NETWORK_BINDING])
    return bindings


def _record(entry: Sequence[Any]) -> AdaptationRecord:
    if len(entry) != 4:
        raise FormatError(f"adaptation log entries have 4 fields, got {entry!r}")
    iteration, loss, accepted, label = entry
    return AdaptationRecord(
        iteration=int(iteration),
        loss=float(loss),
        accepted=bool(accepted),
        label=label,
    )
