from __future__ import annotations

from dataclasses import replace
from typing import Any, Optional, Sequence, Tuple

from ..metamodel.engine import concretize, new_virtual
from ..metamodel.errors import BindingError, CapabilityError
from ..metamodel.models import (
    ADAPTATION_FN,
    ENTITIES,
    MILIEUS,
    STATES,
    UPDATE_FN,
    AdaptationRecord,
    ConcreteParameters,
    Entities,
    Milieus,
    Regime,
    RuleSet,
    SystemModel,
)
from ..metamodel.registry import LocalUpdate
from .learning import Sample, learn
from .network import NeuralNetwork, validate_network
from .propagation import unit_output


NEURAL_UNIT_FN = "neural-unit"
LEARN_FN = "learn"
NETWORK_BINDING = "network"

ANN_STRUCTURES: Tuple[str, ...] = (ENTITIES, STATES, MILIEUS)
ANN_OPERATIONS: Tuple[str, ...] = (UPDATE_FN, ADAPTATION_FN)


def bind_neural_unit(params: ConcreteParameters) -> LocalUpdate:
    net = params.bindings.get(NETWORK_BINDING)
    if not isinstance(net, NeuralNetwork):
        raise BindingError(UPDATE_FN, "the neural-unit update function needs a network binding")
    inputs = set(net.input_units)

    def local(index: int, own: Any, neighbors: Tuple[Any, ...], t_bar: int) -> Any:
        if index in inputs:
            return own
        return unit_output(net, index, own, neighbors)

    return local


def ann_to_system_model(
    net: NeuralNetwork,
    steps: Optional[int] = None,
    g: int = 1,
    l: float = 0.0,
) -> SystemModel:
    """Metastable model with E=B, Q=V, M=R, phi=alpha.beta and psi=learning.

    Update and adaptation rules stay implicit in the bound functions; the
    weights travel as the update function's binding. A layered network of
    depth d settles in d steps, so that is the default t.
    """
    validate_network(net)
    params = ConcreteParameters(
        entities=Entities(tuple(net.units)),
        state_set=net.value_set,
        milieus=Milieus(neighbor_lists=tuple(tuple(sources) for sources in net.incoming)),
        rules=RuleSet(),
        update_fn_id=NEURAL_UNIT_FN,
        adaptation_fn_id=LEARN_FN,
        t=steps if steps is not None else net.depth,
        g=g,
        l=l,
        bindings={NETWORK_BINDING: net},
    )
    return concretize(new_virtual(ANN_STRUCTURES, ANN_OPERATIONS), params)


def system_model_to_ann(model: SystemModel) -> NeuralNetwork:
    if model.regime == Regime.VIRTUAL:
        raise CapabilityError("a virtual model has no network")
    params = model.params
    net = params.bindings.get(NETWORK_BINDING)
    if params.update_fn_id != NEURAL_UNIT_FN or not isinstance(net, NeuralNetwork):
        raise CapabilityError("only neural-unit models correspond to neural networks")
    return replace(
        net,
        units=params.entities.states,
        value_set=params.state_set,
        incoming=params.milieus.neighbor_lists,
    )


def with_inputs(model: SystemModel, inputs: Sequence[Any]) -> SystemModel:
    """Metastable copy whose input entities hold ``inputs``."""
    net = system_model_to_ann(model)
    units = list(net.units)
    for unit, value in zip(net.input_units, inputs):
        units[unit - 1] = value
    params = replace(model.params, entities=Entities(tuple(units)))
    return replace(model, regime=Regime.METASTABLE, params=params, trajectory=None)


def learn_model(
    model: SystemModel,
    dataset: Sequence[Sample],
    g: Optional[int] = None,
    l: Optional[float] = None,
    learning_rate: float = 0.5,
    seed: int = 0,
    reinitialize: bool = True,
) -> Tuple[SystemModel, Tuple[AdaptationRecord, ...]]:
    params = model.params
    trained, log = learn(
        system_model_to_ann(model),
        dataset,
        g=params.g if g is None else g,
        l=params.l if l is None else l,
        learning_rate=learning_rate,
        seed=seed,
        reinitialize=reinitialize,
    )
    bindings = dict(params.bindings)
    bindings[NETWORK_BINDING] = trained
    adapted = replace(params, bindings=bindings)
    return replace(model, regime=Regime.METASTABLE, params=adapted, trajectory=None), log
