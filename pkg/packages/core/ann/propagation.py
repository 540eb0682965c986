from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..metamodel.errors import CapabilityError, DimensionError, DomainError
from .activation import activation
from .network import ActivationKind, NeuralNetwork


@dataclass(frozen=True)
class Gradients:
    weights: Dict[Tuple[int, int], float]
    biases: Dict[int, float]


def input_function(j: int, net: NeuralNetwork, activations: Optional[Sequence[Any]] = None) -> float:
    """Weighted sum of the activations feeding unit ``j``."""
    if j in net.input_units:
        raise DomainError(f"unit {j} is an input unit and has no input function")
    sources = net.incoming[j - 1]
    if not sources:
        raise DomainError(f"unit {j} has no incoming units")
    values = net.units if activations is None else activations
    return weighted_sum(net, j, tuple(values[i - 1] for i in sources))


def weighted_sum(net: NeuralNetwork, j: int, source_values: Sequence[Any]) -> float:
    return sum(net.weights[(i, j)] * value for i, value in zip(net.incoming[j - 1], source_values))


def unit_output(net: NeuralNetwork, j: int, own: Any, source_values: Sequence[Any]) -> Any:
    """alpha(beta_j) from the unit's own value and its incoming values.

    Both forward propagation and the metamodel update go through here so the
    two evaluate the same floating-point expression.
    """
    beta = weighted_sum(net, j, source_values)
    if net.self_weights[j - 1]:
        beta += net.self_weights[j - 1] * own
    if net.activation == ActivationKind.LOGISTIC:
        beta += net.biases[j - 1]
    return activation(beta, net.activation, net.thresholds[j - 1])


def forward_activations(net: NeuralNetwork, inputs: Sequence[Any]) -> List[Any]:
    if not net.is_layered:
        raise CapabilityError("forward propagation needs a layered network")
    if len(inputs) != len(net.input_units):
        raise DimensionError(f"{len(inputs)} inputs for {len(net.input_units)} input units")
    values = list(net.units)
    for unit, value in zip(net.input_units, inputs):
        values[unit - 1] = value
    for layer in net.layers[1:]:
        for j in layer:
            sources = tuple(values[i - 1] for i in net.incoming[j - 1])
            values[j - 1] = unit_output(net, j, values[j - 1], sources)
    return values


def forward(net: NeuralNetwork, inputs: Sequence[Any]) -> Tuple[Any, ...]:
    values = forward_activations(net, inputs)
    return tuple(values[j - 1] for j in net.output_units)


def sample_loss(net: NeuralNetwork, inputs: Sequence[Any], targets: Sequence[Any]) -> float:
    outputs = forward(net, inputs)
    if len(outputs) != len(targets):
        raise DimensionError(f"{len(targets)} targets for {len(outputs)} output units")
    difference = np.asarray(outputs, dtype=float) - np.asarray(targets, dtype=float)
    return float(np.mean(difference ** 2))


def dataset_loss(net: NeuralNetwork, dataset: Sequence[Tuple[Sequence[Any], Sequence[Any]]]) -> float:
    return float(np.mean([sample_loss(net, inputs, targets) for inputs, targets in dataset]))


def gradients(net: NeuralNetwork, inputs: Sequence[Any], targets: Sequence[Any]) -> Gradients:
    """Backpropagated derivatives of ``sample_loss`` for a logistic network."""
    if net.activation != ActivationKind.LOGISTIC:
        raise CapabilityError("backpropagation needs differentiable (logistic) units")
    values = forward_activations(net, inputs)
    outputs = net.output_units
    if len(targets) != len(outputs):
        raise DimensionError(f"{len(targets)} targets for {len(outputs)} output units")
    outgoing: Dict[int, List[int]] = {}
    for j, sources in enumerate(net.incoming, start=1):
        for i in sources:
            outgoing.setdefault(i, []).append(j)

    # delta[j] = dLoss/dbeta_j
    delta: Dict[int, float] = {}
    for j, target in zip(outputs, targets):
        a = values[j - 1]
        delta[j] = 2.0 * (a - target) / len(outputs) * a * (1.0 - a)
    for layer in reversed(net.layers[1:-1]):
        for j in layer:
            downstream = sum(net.weights[(j, k)] * delta[k] for k in outgoing.get(j, ()))
            a = values[j - 1]
            delta[j] = downstream * a * (1.0 - a)

    weight_grads = {
        (i, j): delta[j] * values[i - 1] for j in delta for i in net.incoming[j - 1]
    }
    return Gradients(weights=weight_grads, biases=dict(delta))
