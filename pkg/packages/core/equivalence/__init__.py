from .checks import EquivalenceConfig, check_equivalence, check_operational, check_structural
from .render import exit_status, render_table, report_to_document
from .report import Conclusion, EquivalenceReport

__all__ = [
    "EquivalenceConfig",
    "check_equivalence",
    "check_operational",
    "check_structural",
    "exit_status",
    "render_table",
    "report_to_document",
    "Conclusion",
    "EquivalenceReport",
]
