from __future__ import annotations

import logging
from dataclasses import replace
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..metamodel.errors import CapabilityError, DimensionError, PreconditionError
from ..metamodel.models import AdaptationRecord
from ..tracing import span
from .network import ActivationKind, NeuralNetwork, initialize_weights, validate_network
from .propagation import dataset_loss, forward_activations, gradients


logger = logging.getLogger(__name__)

Sample = Tuple[Sequence[Any], Sequence[Any]]


def learn(
    net: NeuralNetwork,
    dataset: Sequence[Sample],
    g: int,
    l: float,
    learning_rate: float,
    seed: int = 0,
    reinitialize: bool = True,
) -> Tuple[NeuralNetwork, Tuple[AdaptationRecord, ...]]:
    """Adapt the weights until the epoch loss is within ``l`` or ``g`` epochs ran.

    Single-layer threshold networks use the perceptron rule, logistic networks
    stochastic gradient descent with backpropagation. The seed drives weight
    initialisation and the per-epoch sample order.
    """
    validate_network(net)
    _check_arguments(net, dataset, g, l, learning_rate)
    rng = np.random.default_rng(seed)
    if reinitialize:
        net = initialize_weights(net, rng)
    perceptron = net.activation == ActivationKind.THRESHOLD
    update = _perceptron_update if perceptron else _gradient_update
    log: List[AdaptationRecord] = []
    with span("ann.learn", rule="perceptron" if perceptron else "backprop", epochs=g, seed=seed):
        for epoch in range(1, g + 1):
            for index in rng.permutation(len(dataset)):
                inputs, targets = dataset[int(index)]
                net = update(net, inputs, targets, learning_rate)
            epoch_loss = dataset_loss(net, dataset)
            log.append(AdaptationRecord(iteration=epoch, loss=epoch_loss, accepted=True))
            if epoch_loss <= l:
                break
    logger.info(
        "learning_done rule=%s epochs=%s loss=%s",
        "perceptron" if perceptron else "backprop",
        len(log),
        log[-1].loss,
    )
    return net, tuple(log)


def _check_arguments(
    net: NeuralNetwork, dataset: Sequence[Sample], g: int, l: float, learning_rate: float
) -> None:
    if not dataset:
        raise PreconditionError("learning needs a non-empty dataset")
    if g < 1:
        raise PreconditionError(f"g must be at least 1, got {g}")
    if l < 0:
        raise PreconditionError(f"loss tolerance must be non-negative, got {l}")
    if learning_rate <= 0:
        raise PreconditionError(f"learning rate must be positive, got {learning_rate}")
    if not net.is_layered:
        raise CapabilityError("only layered networks can learn")
    if net.activation == ActivationKind.THRESHOLD and len(net.layers) > 2:
        raise CapabilityError("threshold networks with hidden layers cannot be trained")
    for inputs, targets in dataset:
        if len(inputs) != len(net.input_units) or len(targets) != len(net.output_units):
            raise DimensionError(
                f"sample shape {len(inputs)}->{len(targets)} does not fit "
                f"{len(net.input_units)}->{len(net.output_units)}"
            )


def _perceptron_update(
    net: NeuralNetwork, inputs: Sequence[Any], targets: Sequence[Any], rate: float
) -> NeuralNetwork:
    values = forward_activations(net, inputs)
    weights: Dict[Tuple[int, int], float] = dict(net.weights)
    thresholds = list(net.thresholds)
    changed = False
    for j, target in zip(net.output_units, targets):
        error = target - values[j - 1]
        if not error:
            continue
        changed = True
        for i in net.incoming[j - 1]:
            weights[(i, j)] += rate * error * values[i - 1]
        thresholds[j - 1] -= rate * error
    if not changed:
        return net
    return replace(net, weights=weights, thresholds=tuple(thresholds))


def _gradient_update(
    net: NeuralNetwork, inputs: Sequence[Any], targets: Sequence[Any], rate: float
) -> NeuralNetwork:
    grads = gradients(net, inputs, targets)
    weights = {edge: w - rate * grads.weights[edge] for edge, w in net.weights.items()}
    biases = list(net.biases)
    for j, value in grads.biases.items():
        biases[j - 1] -= rate * value
    return replace(net, weights=weights, biases=tuple(biases))
