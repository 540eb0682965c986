from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..ca.milieus import ring_milieu
from ..metamodel.errors import ValidationError
from ..metamodel.models import StateSet


class ActivationKind(str, Enum):
    THRESHOLD = "threshold"
    LOGISTIC = "logistic"


WEIGHT_INIT_RANGE = (-0.5, 0.5)


@dataclass(frozen=True)
class NeuralNetwork:
    """Units, their value set, incoming lists, weights, activation and learning.

    Indices are 1-based. Threshold units compare their input against ``thresholds``;
    logistic units add ``biases`` (an always-1 virtual input). ``self_weights``
    weigh a unit's own activation and are non-zero only for cellular networks,
    which have no ``layers`` and are updated all at once.
    """

    units: Tuple[Any, ...]
    value_set: StateSet
    incoming: Tuple[Tuple[int, ...], ...]
    weights: Mapping[Tuple[int, int], float]
    activation: ActivationKind
    thresholds: Tuple[float, ...]
    biases: Tuple[float, ...]
    self_weights: Tuple[float, ...]
    layers: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def b(self) -> int:
        return len(self.units)

    @property
    def is_layered(self) -> bool:
        return self.layers is not None

    @property
    def input_units(self) -> Tuple[int, ...]:
        return self.layers[0] if self.layers else ()

    @property
    def output_units(self) -> Tuple[int, ...]:
        return self.layers[-1] if self.layers else tuple(range(1, self.b + 1))

    @property
    def depth(self) -> int:
        return len(self.layers) - 1 if self.layers else 1


def value_set_for(activation: ActivationKind) -> StateSet:
    if activation == ActivationKind.THRESHOLD:
        return StateSet.finite((0, 1))
    return StateSet.real_interval(0.0, 1.0)


def validate_network(net: NeuralNetwork) -> None:
    b = net.b
    if b < 1:
        raise ValidationError("a network needs at least one unit")
    for name in ("incoming", "thresholds", "biases", "self_weights"):
        if len(getattr(net, name)) != b:
            raise ValidationError(f"{name} has {len(getattr(net, name))} entries for {b} units")
    edges = set()
    for j, sources in enumerate(net.incoming, start=1):
        if len(set(sources)) != len(sources):
            raise ValidationError(f"unit {j} lists an incoming unit twice")
        for i in sources:
            if not 1 <= i <= b:
                raise ValidationError(f"incoming index {i} of unit {j} is outside 1..{b}")
            if i == j:
                raise ValidationError(f"unit {j} feeds itself through its incoming list")
            edges.add((i, j))
    if set(net.weights) != edges:
        raise ValidationError("weights must be defined for exactly the incoming edges")
    for j, value in enumerate(net.units, start=1):
        if not net.value_set.contains(value):
            raise ValidationError(f"unit {j} holds {value!r}, outside its value set")
    if net.layers is not None:
        _validate_layers(net)


def _validate_layers(net: NeuralNetwork) -> None:
    layers = net.layers
    if len(layers) < 2:
        raise ValidationError("a layered network needs an input and an output layer")
    flat = [unit for layer in layers for unit in layer]
    if sorted(flat) != list(range(1, net.b + 1)):
        raise ValidationError("layers must partition the units")
    seen = set()
    for depth, layer in enumerate(layers):
        for j in layer:
            sources = net.incoming[j - 1]
            if depth == 0 and sources:
                raise ValidationError(f"input unit {j} has incoming units")
            if depth > 0 and not sources:
                raise ValidationError(f"unit {j} in layer {depth} has no incoming units")
            if any(i not in seen for i in sources):
                raise ValidationError(f"unit {j} reads from a unit that is not in an earlier layer")
            if net.self_weights[j - 1] != 0:
                raise ValidationError(f"feed-forward unit {j} has a self weight")
        seen.update(layer)


def feed_forward_network(
    layer_sizes: Sequence[int],
    activation: ActivationKind = ActivationKind.LOGISTIC,
    seed: int = 0,
) -> NeuralNetwork:
    """Fully connected layered network with weights drawn from the seed."""
    if len(layer_sizes) < 2 or any(size < 1 for size in layer_sizes):
        raise ValidationError(f"need at least two non-empty layers, got {list(layer_sizes)}")
    layers: List[Tuple[int, ...]] = []
    start = 1
    for size in layer_sizes:
        layers.append(tuple(range(start, start + size)))
        start += size
    b = start - 1
    incoming: List[Tuple[int, ...]] = [()] * b
    for previous, layer in zip(layers, layers[1:]):
        for j in layer:
            incoming[j - 1] = previous
    zero = 0 if activation == ActivationKind.THRESHOLD else 0.0
    net = NeuralNetwork(
        units=(zero,) * b,
        value_set=value_set_for(activation),
        incoming=tuple(incoming),
        weights={(i, j): 0.0 for j, sources in enumerate(incoming, start=1) for i in sources},
        activation=activation,
        thresholds=(0.0,) * b,
        biases=(0.0,) * b,
        self_weights=(0.0,) * b,
        layers=tuple(layers),
    )
    return initialize_weights(net, np.random.default_rng(seed))


def initialize_weights(net: NeuralNetwork, rng: np.random.Generator) -> NeuralNetwork:
    """Uniform weights, and thresholds or biases of non-input units, in WEIGHT_INIT_RANGE."""
    low, high = WEIGHT_INIT_RANGE
    edges = [(i, j) for j, sources in enumerate(net.incoming, start=1) for i in sources]
    trainable = [j for j in range(1, net.b + 1) if j not in set(net.input_units)]
    draws = rng.uniform(low, high, size=len(edges) + len(trainable))
    weights = {edge: float(value) for edge, value in zip(edges, draws)}
    offsets = [float(value) for value in draws[len(edges):]]
    thresholds = list(net.thresholds)
    biases = list(net.biases)
    for j, value in zip(trainable, offsets):
        if net.activation == ActivationKind.THRESHOLD:
            thresholds[j - 1] = value
        else:
            biases[j - 1] = value
    return replace(net, weights=weights, thresholds=tuple(thresholds), biases=tuple(biases))


def threshold_unit_network(weights: Sequence[float], theta: float) -> NeuralNetwork:
    """One threshold unit fed by ``len(weights)`` input units."""
    r = len(weights)
    out = r + 1
    sources = tuple(range(1, r + 1))
    return NeuralNetwork(
        units=(0,) * out,
        value_set=value_set_for(ActivationKind.THRESHOLD),
        incoming=((),) * r + (sources,),
        weights={(i, out): float(w) for i, w in zip(sources, weights)},
        activation=ActivationKind.THRESHOLD,
        thresholds=(0.0,) * r + (float(theta),),
        biases=(0.0,) * out,
        self_weights=(0.0,) * out,
        layers=(sources, (out,)),
    )


def ring_threshold_network(
    c: int,
    radius: int,
    weights: Sequence[float],
    theta: float,
    units: Optional[Sequence[int]] = None,
) -> NeuralNetwork:
    """Cellular threshold network: every unit reads its ring neighbours and itself.

    ``weights`` follow the neighbourhood order left..., self, right... .
    """
    if len(weights) != 2 * radius + 1:
        raise ValidationError(f"need {2 * radius + 1} weights for radius {radius}, got {len(weights)}")
    incoming = ring_milieu(c, radius)
    neighbor_weights = list(weights[:radius]) + list(weights[radius + 1:])
    edge_weights: Dict[Tuple[int, int], float] = {}
    for j, sources in enumerate(incoming, start=1):
        for i, w in zip(sources, neighbor_weights):
            edge_weights[(i, j)] = float(w)
    return NeuralNetwork(
        units=tuple(units) if units is not None else (0,) * c,
        value_set=value_set_for(ActivationKind.THRESHOLD),
        incoming=incoming,
        weights=edge_weights,
        activation=ActivationKind.THRESHOLD,
        thresholds=(float(theta),) * c,
        biases=(0.0,) * c,
        self_weights=(float(weights[radius]),) * c,
        layers=None,
    )
