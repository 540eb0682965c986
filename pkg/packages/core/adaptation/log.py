from __future__ import annotations

from typing import List, Sequence

from ..metamodel.errors import FormatError
from ..metamodel.models import AdaptationRecord


def format_adaptation_log(records: Sequence[AdaptationRecord]) -> str:
    lines = [
        f"{record.iteration} {record.loss!r} {1 if record.accepted else 0} {record.label or '-'}"
        for record in records
    ]
    return "\n".join(lines) + "\n" if lines else ""


def parse_adaptation_log(text: str) -> List[AdaptationRecord]:
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4 or parts[2] not in ("0", "1"):
            raise FormatError(f"adaptation log lines are '<g> <loss> <0|1> <label>': {line!r}")
        try:
            iteration, loss = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise FormatError(f"bad adaptation log line {line!r}") from exc
        records.append(
            AdaptationRecord(
                iteration=iteration,
                loss=loss,
                accepted=parts[2] == "1",
                label=None if parts[3] == "-" else parts[3],
            )
        )
    return records


def write_adaptation_log(records: Sequence[AdaptationRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_adaptation_log(records))
