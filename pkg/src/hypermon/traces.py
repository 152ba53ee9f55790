"""I/O-pair traces, observations, verdicts, and the CSV trace format.

A trace is one observed execution of the monitored method: the tuple of
integer inputs plus the produced output.  Observations are finite,
duplicate-free sets of such pairs; the monitor's state is an observation.

CSV format: one trace per line, ``i1, i2, ..., in, out``, base-10 signed
integers, comma-separated, arbitrary whitespace around fields, no quoting
and no header.  Blank lines and lines starting with ``#`` are skipped;
the comment convention is an ergonomic extension of the plain format.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import TraceFormatError


class Verdict3(Enum):
    """Three-valued monitor output."""

    TOP = "TOP"
    BOTTOM = "BOTTOM"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value

    @property
    def symbol(self) -> str:
        return {"TOP": "⊤", "BOTTOM": "⊥", "UNKNOWN": "?"}[self.value]


@dataclass(frozen=True)
class IoPair:
    """One observed execution: input tuple plus output value."""

    inputs: tuple[int, ...]
    output: int

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def proj(self, i: int) -> int:
        """The i-th input, 1-indexed."""
        return self.inputs[i - 1]

    def __str__(self):
        return serialize_pair(self)


class Observation:
    """A finite, duplicate-free set of IoPairs.

    Membership is set-semantic; insertion order is retained for reporting.
    Re-adding an existing pair leaves the observation unchanged.  A
    completed observation is immutable in spirit: construction is
    single-writer, after which it is safe to share across readers.
    """

    def __init__(self, pairs: Iterable[IoPair] = ()):
        self._order: list[IoPair] = []
        self._seen: set[IoPair] = set()
        for p in pairs:
            self.add(p)

    def add(self, pair: IoPair) -> bool:
        """Insert a pair. Returns True if it was new."""
        if pair in self._seen:
            return False
        self._seen.add(pair)
        self._order.append(pair)
        return True

    def __contains__(self, pair: IoPair) -> bool:
        return pair in self._seen

    def __iter__(self) -> Iterator[IoPair]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Observation):
            return NotImplemented
        return self._seen == other._seen

    def __repr__(self):
        return f"Observation({self._order!r})"


def parse_csv_line(line: str, arity: int, lineno: int | None = None) -> IoPair:
    """Parse one CSV trace line into an IoPair.

    The line must contain exactly ``arity + 1`` comma-separated integer
    fields: the inputs in order, then the output.
    """
    fields = line.split(",")
    if len(fields) != arity + 1:
        raise TraceFormatError(
            f"expected {arity + 1} fields, got {len(fields)}: {line.strip()!r}",
            lineno,
        )
    values = []
    for field in fields:
        text = field.strip()
        try:
            values.append(int(text, 10))
        except ValueError:
            raise TraceFormatError(
                f"non-integer field {text!r} in {line.strip()!r}", lineno
            ) from None
    return IoPair(tuple(values[:arity]), values[arity])


def serialize_pair(pair: IoPair) -> str:
    """Canonical CSV form; parse_csv_line(serialize_pair(p)) == p."""
    return ", ".join(str(v) for v in (*pair.inputs, pair.output))


def content_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield (lineno, text) for non-blank, non-comment lines, 1-indexed."""
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        yield lineno, raw


def ingest_stream(
    lines: Iterable[str], arity: int, strict: bool = True
) -> Iterator[IoPair]:
    """Parse a line sequence into IoPairs, in order.

    Blank lines and '#' comments are skipped.  Malformed lines raise
    TraceFormatError (with line number) when strict, and are skipped
    otherwise.  Suitable for incremental monitoring after each line.
    """
    for lineno, raw in content_lines(lines):
        try:
            yield parse_csv_line(raw, arity, lineno)
        except TraceFormatError:
            if strict:
                raise
