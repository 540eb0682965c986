from .automaton import (
    CellularAutomaton,
    ca_to_system_model,
    elementary_automaton,
    life_automaton,
    system_model_to_ca,
)
from .milieus import moore_milieu, ring_milieu
from .rules import RuleTable, elementary_rule_table, life_rule_table

__all__ = [
    "CellularAutomaton",
    "ca_to_system_model",
    "elementary_automaton",
    "life_automaton",
    "system_model_to_ca",
    "moore_milieu",
    "ring_milieu",
    "RuleTable",
    "elementary_rule_table",
    "life_rule_table",
]
