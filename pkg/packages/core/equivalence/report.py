from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Optional, Tuple


class StructuralStatus(str, Enum):
    MATCHED = "matched"
    MISMATCHED = "mismatched"
    MISSING_IN_LEFT = "missing-in-left"
    MISSING_IN_RIGHT = "missing-in-right"


class OperationalStatus(str, Enum):
    EXTENSIONALLY_EQUAL = "extensionally-equal"
    COUNTEREXAMPLE = "counterexample"
    SIGNATURE_MISMATCH = "signature-mismatch"
    SAME_BINDING = "same-binding"
    MISSING_IN_LEFT = "missing-in-left"
    MISSING_IN_RIGHT = "missing-in-right"


class Conclusion(str, Enum):
    EQUIVALENT = "equivalent"
    CONDITIONALLY_EQUIVALENT = "conditionally-equivalent"
    NOT_EQUIVALENT = "not-equivalent"


_MISSING = {"missing-in-left", "missing-in-right"}
_FAILING = {"mismatched", "counterexample", "signature-mismatch"}
_SWAPPED = {"missing-in-left": "missing-in-right", "missing-in-right": "missing-in-left"}


@dataclass(frozen=True)
class StructuralVerdict:
    status: StructuralStatus
    aspect: Optional[str] = None
    left: Any = None
    right: Any = None

    def mirrored(self) -> "StructuralVerdict":
        status = StructuralStatus(_SWAPPED.get(self.status.value, self.status.value))
        return replace(self, status=status, left=self.right, right=self.left)


@dataclass(frozen=True)
class OperationalVerdict:
    """``size`` is the domain size checked, or the sample count when ``sampled``."""

    status: OperationalStatus
    size: Optional[int] = None
    sampled: bool = False
    neighborhood: Optional[Tuple[Any, ...]] = None
    entity: Optional[int] = None
    left: Any = None
    right: Any = None
    detail: Optional[str] = None

    def mirrored(self) -> "OperationalVerdict":
        status = OperationalStatus(_SWAPPED.get(self.status.value, self.status.value))
        return replace(self, status=status, left=self.right, right=self.left)


@dataclass(frozen=True)
class ReportEntry:
    kind: str
    verdict: Any


@dataclass(frozen=True)
class EquivalenceReport:
    structural: Tuple[ReportEntry, ...]
    operational: Tuple[ReportEntry, ...]

    @property
    def entries(self) -> Tuple[ReportEntry, ...]:
        return self.structural + self.operational

    @property
    def conditions(self) -> Tuple[ReportEntry, ...]:
        return tuple(entry for entry in self.entries if entry.verdict.status.value in _MISSING)

    @property
    def conclusion(self) -> Conclusion:
        statuses = {entry.verdict.status.value for entry in self.entries}
        if statuses & _FAILING:
            return Conclusion.NOT_EQUIVALENT
        if statuses & _MISSING:
            return Conclusion.CONDITIONALLY_EQUIVALENT
        return Conclusion.EQUIVALENT

    def mirrored(self) -> "EquivalenceReport":
        return EquivalenceReport(
            structural=tuple(ReportEntry(entry.kind, entry.verdict.mirrored()) for entry in self.structural),
            operational=tuple(ReportEntry(entry.kind, entry.verdict.mirrored()) for entry in self.operational),
        )
