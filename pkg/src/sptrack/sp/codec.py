"""Run-length coding of a repeated unit as a self-referential ``X ... #X`` pattern.

A sequence made of ``n`` copies of a unit is encoded as ``X 1 1 ... 1 #X``
with one ``1`` per copy (unary count), or as ``X #X`` when the count is
dropped (lossy).
"""
from __future__ import annotations

from typing import Sequence

from .patterns import PatternError, Symbol, symbols

OPEN = "X"
CLOSE = "#X"
COUNT = "1"


class CodecError(PatternError):
    """Input is not a whole number of unit repetitions, or a malformed code."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        ValueError.__init__(self, message if position is None else f"{message} (at position {position})")
        self.line = None


def _unit(unit) -> tuple[Symbol, ...]:
    u = symbols(unit)
    if not u:
        raise CodecError("unit must not be empty")
    return u


def repetitions(seq: Sequence[Symbol], unit: Sequence[Symbol]) -> int:
    """Number of whole copies of ``unit`` making up ``seq``.

    Raises CodecError naming the first position that breaks the repetition.
    """
    seq = symbols(seq)
    unit = _unit(unit)
    if not seq:
        raise CodecError("sequence is empty", 0)
    m = len(unit)
    for i, s in enumerate(seq):
        if s != unit[i % m]:
            raise CodecError(f"expected {unit[i % m]!r}, found {s!r}", i)
    if len(seq) % m:
        raise CodecError("sequence ends inside a partial unit", len(seq) - len(seq) % m)
    return len(seq) // m


def run_length_compress(seq: Sequence[Symbol], unit: Sequence[Symbol],
                        lossless: bool = True) -> list[Symbol]:
    n = repetitions(seq, unit)
    if not lossless:
        return [OPEN, CLOSE]
    return [OPEN] + [COUNT] * n + [CLOSE]


def run_length_decompress(code: Sequence[Symbol], unit: Sequence[Symbol]) -> list[Symbol]:
    code = symbols(code)
    unit = _unit(unit)
    if len(code) < 2 or code[0] != OPEN:
        raise CodecError(f"code must start with {OPEN!r}", 0)
    if code[-1] != CLOSE:
        raise CodecError(f"code must end with {CLOSE!r}", len(code) - 1)
    body = code[1:-1]
    for i, s in enumerate(body, 1):
        if s != COUNT:
            raise CodecError(f"non-count symbol {s!r} inside code", i)
    if not body:
        raise CodecError("lossy code carries no count", 1)
    return list(unit) * len(body)


__all__ = ["CodecError", "repetitions", "run_length_compress", "run_length_decompress"]
