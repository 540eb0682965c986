from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from .errors import BindingError
from .models import ADAPTATION_FN, UPDATE_FN, ConcreteParameters


# (entity index, own state, milieu states, current time step) -> next state
LocalUpdate = Callable[[int, Any, Tuple[Any, ...], int], Any]
UpdateBinder = Callable[[ConcreteParameters], LocalUpdate]


@dataclass(frozen=True)
class FunctionDefinition:
    name: str
    kind: str
    description: str
    handler: Callable[..., Any]


class FunctionRegistry:
    """Maps update and adaptation function ids to their implementations.

    Update handlers are binders: called once with the concrete parameters,
    they return the local rule applied to every entity.
    """

    def __init__(self) -> None:
        self._functions: Dict[Tuple[str, str], FunctionDefinition] = {}

    def register(self, definition: FunctionDefinition) -> None:
        self._functions[(definition.kind, definition.name)] = definition

    def get(self, kind: str, name: str) -> FunctionDefinition:
        definition = self._functions.get((kind, name))
        if definition is None:
            raise BindingError(kind, f"unknown {kind} implementation {name!r}")
        return definition

    def has(self, kind: str, name: str) -> bool:
        return (kind, name) in self._functions

    def has_any(self, name: str) -> bool:
        return any(key[1] == name for key in self._functions)

    def list_functions(self, kind: Optional[str] = None) -> List[str]:
        return [name for (fn_kind, name) in self._functions if kind is None or fn_kind == kind]


def build_function_registry() -> FunctionRegistry:
    from ..adaptation.evolution import evolve_model
    from ..ann.embedding import bind_neural_unit, learn_model
    from ..ca.automaton import bind_rule_table

    registry = FunctionRegistry()
    registry.register(
        FunctionDefinition(
            name="rule-table",
            kind=UPDATE_FN,
            description="Look the neighbourhood up in the model's rule table.",
            handler=bind_rule_table,
        )
    )
    registry.register(
        FunctionDefinition(
            name="neural-unit",
            kind=UPDATE_FN,
            description="Weighted input sum followed by the unit activation.",
            handler=bind_neural_unit,
        )
    )
    registry.register(
        FunctionDefinition(
            name="evolve-rules",
            kind=ADAPTATION_FN,
            description="Evolutionary search over rule tables towards the adaptation end.",
            handler=evolve_model,
        )
    )
    registry.register(
        FunctionDefinition(
            name="learn",
            kind=ADAPTATION_FN,
            description="Perceptron or backpropagation learning of network weights.",
            handler=learn_model,
        )
    )
    return registry


_DEFAULT_REGISTRY: Optional[FunctionRegistry] = None


def default_registry() -> FunctionRegistry:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = build_function_registry()
    return _DEFAULT_REGISTRY
