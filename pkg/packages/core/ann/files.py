from __future__ import annotations

import json
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field
from pydantic import ValidationError as SchemaError

from ..metamodel.errors import FormatError, MetamodelError
from ..metamodel.serialization import (
    StateSetDocument,
    dumps_document,
    format_state,
    read_text,
    state_set_from_document,
    state_set_to_document,
)
from .learning import Sample
from .network import ActivationKind, NeuralNetwork, validate_network


class NetworkDocument(BaseModel):
    activation: Literal["threshold", "logistic"]
    value_set: StateSetDocument
    units: List[Any]
    layers: Optional[List[List[int]]] = None
    incoming: List[List[int]]
    weights: List[Tuple[int, int, float]] = Field(default_factory=list)
    thresholds: List[float]
    biases: List[float]
    self_weights: List[float]


def network_to_document(net: NeuralNetwork) -> Dict[str, Any]:
    return {
        "activation": net.activation.value,
        "value_set": state_set_to_document(net.value_set),
        "units": list(net.units),
        "layers": [list(layer) for layer in net.layers] if net.layers is not None else None,
        "incoming": [list(sources) for sources in net.incoming],
        "weights": [[i, j, w] for (i, j), w in net.weights.items()],
        "thresholds": list(net.thresholds),
        "biases": list(net.biases),
        "self_weights": list(net.self_weights),
    }


def network_from_document(raw: Dict[str, Any]) -> NeuralNetwork:
    try:
        document = NetworkDocument.model_validate(raw)
    except SchemaError as exc:
        raise FormatError(f"malformed network document: {exc}") from exc
    net = NeuralNetwork(
        units=tuple(document.units),
        value_set=state_set_from_document(document.value_set),
        incoming=tuple(tuple(sources) for sources in document.incoming),
        weights={(i, j): w for i, j, w in document.weights},
        activation=ActivationKind(document.activation),
        thresholds=tuple(document.thresholds),
        biases=tuple(document.biases),
        self_weights=tuple(document.self_weights),
        layers=tuple(tuple(layer) for layer in document.layers) if document.layers is not None else None,
    )
    try:
        validate_network(net)
    except MetamodelError as exc:
        raise FormatError(f"invalid network: {exc}") from exc
    return net


def save_network(net: NeuralNetwork, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_document(network_to_document(net)))


def load_network(path: str) -> NeuralNetwork:
    try:
        raw = json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    return network_from_document(raw)


def parse_dataset(text: str) -> List[Sample]:
    """One sample per line: ``inputs | targets``; blank lines and # comments skipped."""
    samples: List[Sample] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.count("|") != 1:
            raise FormatError(f"dataset line {number} needs exactly one '|': {line!r}")
        left, right = line.split("|")
        try:
            inputs = tuple(_number(token) for token in left.split())
            targets = tuple(_number(token) for token in right.split())
        except ValueError as exc:
            raise FormatError(f"dataset line {number} holds a non-number: {line!r}") from exc
        samples.append((inputs, targets))
    return samples


def format_dataset(samples: Sequence[Sample]) -> str:
    lines = [
        " ".join(format_state(value) for value in inputs)
        + " | "
        + " ".join(format_state(value) for value in targets)
        for inputs, targets in samples
    ]
    return "\n".join(lines) + "\n"


def read_dataset(path: str) -> List[Sample]:
    return parse_dataset(read_text(path))


def _number(token: str) -> Any:
    try:
        return int(token)
    except ValueError:
        return float(token)
