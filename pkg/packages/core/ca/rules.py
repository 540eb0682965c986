from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple

from ..metamodel.errors import FormatError, RangeError, UndefinedTransitionError, ValidationError


BINARY_STATES: Tuple[int, int] = (0, 1)
WOLFRAM_PREFIX = "wolfram:"


def canonical_keys(states: Sequence[Any], arity: int) -> Iterator[Tuple[Any, ...]]:
    """Neighbourhoods in Wolfram order: highest state positions first (111, 110, ..., 000)."""
    return itertools.product(tuple(reversed(tuple(states))), repeat=arity)


@dataclass(frozen=True)
class RuleTable:
    """Extensional transition function over neighbourhood tuples of length ``arity``.

    Keys put the cell's own state in the middle (left, self, right for a
    radius-1 ring). A table may be partial; looking up a missing key raises.
    """

    states: Tuple[Any, ...]
    arity: int
    entries: Mapping[Tuple[Any, ...], Any]

    @classmethod
    def from_entries(
        cls, states: Sequence[Any], arity: int, entries: Mapping[Tuple[Any, ...], Any]
    ) -> "RuleTable":
        states = tuple(states)
        allowed = set(states)
        for key, value in entries.items():
            if len(key) != arity or not set(key) <= allowed:
                raise ValidationError(f"rule key {key!r} is not a neighbourhood over {states!r}")
            if value not in allowed:
                raise ValidationError(f"rule output {value!r} for {key!r} is not a state")
        ordered = {key: entries[key] for key in canonical_keys(states, arity) if key in entries}
        return cls(states=states, arity=arity, entries=ordered)

    @classmethod
    def from_number(cls, number: int, states: Sequence[Any] = BINARY_STATES, arity: int = 3) -> "RuleTable":
        states = tuple(states)
        k = len(states)
        size = k ** arity
        if isinstance(number, bool) or not isinstance(number, int) or not 0 <= number < k ** size:
            raise RangeError(f"rule number {number!r} is outside 0..{k ** size - 1}")
        entries: Dict[Tuple[Any, ...], Any] = {}
        for key in canonical_keys(states, arity):
            digit = (number // k ** _index(key, states)) % k
            entries[key] = states[digit]
        return cls(states=states, arity=arity, entries=entries)

    @property
    def k(self) -> int:
        return len(self.states)

    @property
    def is_total(self) -> bool:
        return len(self.entries) == self.k ** self.arity

    @property
    def rule_number(self) -> Optional[int]:
        """Generalised Wolfram number; ``None`` for a partial table."""
        if not self.is_total:
            return None
        return sum(
            self.states.index(value) * self.k ** _index(key, self.states)
            for key, value in self.entries.items()
        )

    def lookup(self, key: Tuple[Any, ...]) -> Any:
        try:
            return self.entries[key]
        except KeyError:
            raise UndefinedTransitionError(tuple(key)) from None

    def with_entry(self, key: Tuple[Any, ...], value: Any) -> "RuleTable":
        entries = dict(self.entries)
        entries[tuple(key)] = value
        return RuleTable.from_entries(self.states, self.arity, entries)

    def label(self) -> str:
        number = self.rule_number
        if number is not None and self.k ** self.arity <= 8:
            return str(number)
        return hashlib.sha1(format_rule_lines(self).encode("utf-8")).hexdigest()[:12]


def _index(key: Sequence[Any], states: Tuple[Any, ...]) -> int:
    index = 0
    for value in key:
        index = index * len(states) + states.index(value)
    return index


def elementary_rule_table(rule_number: int) -> RuleTable:
    if isinstance(rule_number, bool) or not isinstance(rule_number, int) or not 0 <= rule_number <= 255:
        raise RangeError(f"elementary rule numbers are 0..255, got {rule_number!r}")
    return RuleTable.from_number(rule_number, BINARY_STATES, 3)


def life_rule_table() -> RuleTable:
    entries: Dict[Tuple[int, ...], int] = {}
    for key in canonical_keys(BINARY_STATES, 9):
        own = key[4]
        alive = sum(key) - own
        if own == 1:
            entries[key] = 1 if alive in (2, 3) else 0
        else:
            entries[key] = 1 if alive == 3 else 0
    return RuleTable(states=BINARY_STATES, arity=9, entries=entries)


def format_rule_lines(table: RuleTable) -> str:
    lines = [f"{_format_key(key)} -> {value}" for key, value in table.entries.items()]
    return "\n".join(lines)


def format_rule_table(table: RuleTable) -> str:
    if table.is_total:
        return f"{WOLFRAM_PREFIX}{table.rule_number}"
    return format_rule_lines(table)


def parse_rule_table(text: str, states: Sequence[Any], arity: int) -> RuleTable:
    states = tuple(states)
    body = text.strip()
    if body.startswith(WOLFRAM_PREFIX):
        try:
            number = int(body[len(WOLFRAM_PREFIX):])
        except ValueError as exc:
            raise FormatError(f"bad rule number in {body!r}") from exc
        return RuleTable.from_number(number, states, arity)
    symbols = {str(state): state for state in states}
    entries: Dict[Tuple[Any, ...], Any] = {}
    for line in body.splitlines():
        line = line.strip()
        if not line:
            continue
        if "->" not in line:
            raise FormatError(f"rule line without '->': {line!r}")
        raw_key, raw_value = (part.strip() for part in line.split("->", 1))
        parts = raw_key.split(",") if "," in raw_key else list(raw_key)
        try:
            key = tuple(symbols[part.strip()] for part in parts)
            value = symbols[raw_value]
        except KeyError as exc:
            raise FormatError(f"unknown state symbol in rule line {line!r}") from exc
        entries[key] = value
    return RuleTable.from_entries(states, arity, entries)


def _format_key(key: Tuple[Any, ...]) -> str:
    symbols = [str(value) for value in key]
    if all(len(symbol) == 1 for symbol in symbols):
        return "".join(symbols)
    return ",".join(symbols)
