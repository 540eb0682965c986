from __future__ import annotations

from typing import Any, Dict, List

from .report import (
    Conclusion,
    EquivalenceReport,
    OperationalStatus,
    OperationalVerdict,
    StructuralStatus,
    StructuralVerdict,
)


EXIT_STATUS = {
    Conclusion.EQUIVALENT: 0,
    Conclusion.CONDITIONALLY_EQUIVALENT: 1,
    Conclusion.NOT_EQUIVALENT: 2,
}
ERROR_STATUS = 3


def exit_status(report: EquivalenceReport) -> int:
    return EXIT_STATUS[report.conclusion]


def report_to_document(report: EquivalenceReport) -> Dict[str, Any]:
    return {
        "conclusion": report.conclusion.value,
        "conditions": [
            {"kind": entry.kind, "verdict": entry.verdict.status.value} for entry in report.conditions
        ],
        "structural": [
            {"kind": entry.kind, **_structural_document(entry.verdict)} for entry in report.structural
        ],
        "operational": [
            {"kind": entry.kind, **_operational_document(entry.verdict)} for entry in report.operational
        ],
    }


def describe(verdict: Any) -> str:
    if isinstance(verdict, StructuralVerdict):
        if verdict.status == StructuralStatus.MISMATCHED:
            return f"mismatched({verdict.aspect}: {verdict.left!r} vs {verdict.right!r})"
        return verdict.status.value
    status = verdict.status
    if status == OperationalStatus.EXTENSIONALLY_EQUAL:
        if verdict.sampled:
            return f"extensionally-equal(sampled {verdict.size})"
        return f"extensionally-equal({verdict.size})"
    if status == OperationalStatus.COUNTEREXAMPLE:
        text = f"counterexample({verdict.neighborhood!r}, {verdict.left!r}, {verdict.right!r})"
        if verdict.entity is not None:
            text += f" at entity {verdict.entity}"
        return text + (" sampled" if verdict.sampled else "")
    if status == OperationalStatus.SIGNATURE_MISMATCH:
        return f"signature-mismatch({verdict.detail}: {verdict.left!r} vs {verdict.right!r})"
    if status == OperationalStatus.SAME_BINDING:
        return f"same-binding({verdict.detail})"
    return status.value


def render_table(report: EquivalenceReport) -> str:
    rows = [("section", "kind", "verdict")]
    rows.extend(("structure", entry.kind, describe(entry.verdict)) for entry in report.structural)
    rows.extend(("operation", entry.kind, describe(entry.verdict)) for entry in report.operational)
    widths = [max(len(row[column]) for row in rows) for column in range(2)]
    lines: List[str] = []
    for section, kind, verdict in rows:
        lines.append(f"{section.ljust(widths[0])}  {kind.ljust(widths[1])}  {verdict}".rstrip())
    conclusion = report.conclusion.value
    if report.conditions:
        missing = ", ".join(f"{entry.kind} {entry.verdict.status.value}" for entry in report.conditions)
        conclusion += f" [{missing}]"
    lines.append(f"conclusion: {conclusion}")
    return "\n".join(lines) + "\n"


def _structural_document(verdict: StructuralVerdict) -> Dict[str, Any]:
    document: Dict[str, Any] = {"verdict": verdict.status.value}
    if verdict.status == StructuralStatus.MISMATCHED:
        document.update({"aspect": verdict.aspect, "left": verdict.left, "right": verdict.right})
    return document


def _operational_document(verdict: OperationalVerdict) -> Dict[str, Any]:
    document: Dict[str, Any] = {"verdict": verdict.status.value}
    status = verdict.status
    if status == OperationalStatus.EXTENSIONALLY_EQUAL:
        document.update({"size": verdict.size, "sampled": verdict.sampled})
    elif status == OperationalStatus.COUNTEREXAMPLE:
        document.update(
            {
                "neighborhood": list(verdict.neighborhood),
                "entity": verdict.entity,
                "left": verdict.left,
                "right": verdict.right,
                "sampled": verdict.sampled,
            }
        )
    elif status == OperationalStatus.SIGNATURE_MISMATCH:
        document.update({"detail": verdict.detail, "left": verdict.left, "right": verdict.right})
    elif status == OperationalStatus.SAME_BINDING:
        document["function"] = verdict.detail
    return document
