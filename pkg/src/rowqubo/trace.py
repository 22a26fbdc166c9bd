"""Address traces, per-bit toggle sets and a row-buffer walk.

Bit index 0 is the leftmost character of a binary line, i.e. the most
significant bit of the declared width. Transition ``i`` sits between
address ``i - 1`` and address ``i``, so transition indices start at 1.
"""

from __future__ import annotations

import os
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import AddressOverflowError, DomainError, TraceFormatError, ParseError

__all__ = [
    "AddressTrace",
    "ToggleSets",
    "RowBitSelection",
    "parse_trace",
    "read_trace",
    "compute_toggle_sets",
    "count_row_misses",
]

_HEX_DIGITS = frozenset(string.hexdigits)


@dataclass(frozen=True)
class AddressTrace:
    """Ordered addresses as a read-only ``(num_addresses, width)`` uint8 array."""

    width: int
    bits: np.ndarray = field(repr=False)
    source: str = "inline"

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8, copy=True)
        if bits.ndim != 2 or bits.shape[0] == 0:
            raise DomainError("a trace needs at least one address")
        if bits.shape[1] != self.width or self.width < 1:
            raise DomainError(f"addresses have {bits.shape[1]} bits, expected width {self.width}")
        if np.any(bits > 1):
            raise DomainError("address bits must be 0 or 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_strings(cls, lines: Iterable[str], source: str = "inline") -> "AddressTrace":
        return parse_trace("\n".join(lines), fmt="bin", source=source)

    def __len__(self):
        return self.bits.shape[0]

    @property
    def addresses(self) -> list[tuple[int, ...]]:
        return [tuple(int(b) for b in row) for row in self.bits]

    @property
    def num_transitions(self) -> int:
        return len(self) - 1

    def to_lines(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.bits]

    def permute_columns(self, order: Sequence[int]) -> "AddressTrace":
        """New trace whose column ``j`` is column ``order[j]`` of this one."""
        return AddressTrace(self.width, self.bits[:, list(order)], self.source)


@dataclass(frozen=True)
class ToggleSets:
    width: int
    num_transitions: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.sets) != self.width:
            raise DomainError(f"expected {self.width} toggle sets, got {len(self.sets)}")
        for j, s in enumerate(self.sets):
            if any(b <= a for a, b in zip(s, s[1:])):
                raise DomainError(f"toggle set {j} is not strictly increasing")
            if s and (s[0] < 1 or s[-1] > self.num_transitions):
                raise DomainError(f"toggle set {j} has an index outside 1..{self.num_transitions}")


@dataclass(frozen=True)
class RowBitSelection:
    selected_bits: frozenset[int]

    def __init__(self, bits: Iterable[int] = ()):
        bits = list(bits)
        if len(set(bits)) != len(bits):
            raise DomainError(f"duplicate row bits in {bits}")
        if any(b < 0 for b in bits):
            raise DomainError(f"negative row bit in {bits}")
        object.__setattr__(self, "selected_bits", frozenset(bits))

    def __len__(self):
        return len(self.selected_bits)

    def __iter__(self):
        return iter(sorted(self.selected_bits))


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_trace(text: str, fmt: str = "bin", width: int | None = None,
                source: str = "inline") -> AddressTrace:
    """Parse trace file content.

    ``fmt`` is ``"bin"`` (one ``0``/``1`` string per line, width taken from
    the lines) or ``"hex"`` (one hex literal per line, optional ``0x``
    prefix, ``width`` required). Blank lines and ``#`` comments are skipped.
    """
    if fmt not in ("bin", "hex"):
        raise DomainError(f"unknown trace format {fmt!r}")
    rows: list[list[int]] = []
    if fmt == "bin":
        first_len = None
        for lineno, line in _data_lines(text):
            bad = next((c for c in line if c not in "01"), None)
            if bad is not None:
                raise ParseError(f"non-binary character {bad!r}", lineno, source)
            if first_len is None:
                first_len = len(line)
            elif len(line) != first_len:
                raise TraceFormatError(
                    f"address has {len(line)} bits, earlier lines have {first_len}", lineno, source)
            rows.append([1 if c == "1" else 0 for c in line])
        if width is not None and first_len is not None and width != first_len:
            raise TraceFormatError(f"lines have {first_len} bits but width {width} was declared",
                                   None, source)
        width = first_len
    else:
        if width is None or width < 1:
            raise DomainError("hex traces need a positive declared width")
        for lineno, line in _data_lines(text):
            digits = line[2:] if line[:2].lower() == "0x" else line
            if not digits or any(c not in _HEX_DIGITS for c in digits):
                raise ParseError(f"not a hex literal: {line!r}", lineno, source)
            value = int(digits, 16)
            if value >> width:
                raise AddressOverflowError(f"value {line} does not fit in {width} bits",
                                           lineno, source)
            rows.append([(value >> (width - 1 - j)) & 1 for j in range(width)])
    if not rows:
        raise ParseError("trace contains no addresses", None, source)
    return AddressTrace(width, np.array(rows, dtype=np.uint8), source)


def read_trace(path: str | os.PathLike, fmt: str = "bin", width: int | None = None) -> AddressTrace:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_trace(text, fmt=fmt, width=width, source=os.fspath(path))


def compute_toggle_sets(trace: AddressTrace) -> ToggleSets:
    """Column-wise flips: ``sets[j]`` holds every ``i`` with bit j of a[i-1] != a[i]."""
    flips = trace.bits[1:] != trace.bits[:-1]
    sets = tuple(tuple(int(i) + 1 for i in np.flatnonzero(flips[:, j]))
                 for j in range(trace.width))
    return ToggleSets(trace.width, trace.num_transitions, sets)


def count_row_misses(trace: AddressTrace, selection: RowBitSelection | Iterable[int]) -> int:
    """Walk the trace with one open row and count row changes.

    The row value of an address is its bits restricted to ``selection``.
    Opening the very first row is not a miss.
    """
    if not isinstance(selection, RowBitSelection):
        selection = RowBitSelection(selection)
    cols = list(selection)
    if any(c >= trace.width for c in cols):
        raise DomainError(f"row bits {cols} out of range for width {trace.width}")
    open_row = None
    misses = 0
    for address in trace.addresses:
        row = tuple(address[c] for c in cols)
        if open_row is not None and row != open_row:
            misses += 1
        open_row = row
    return misses
