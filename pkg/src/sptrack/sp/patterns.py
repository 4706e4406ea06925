"""Patterns, the Old-pattern store and the ``.sp`` pattern file format.

A pattern is an ordered run of atomic symbols.  Symbols are plain strings
compared by exact equality; nothing ever gives them a numeric meaning, so
``"1"`` and ``"01"`` are unrelated symbols.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

Symbol = str

_WS = re.compile(r"\s")


class PatternError(ValueError):
    """Malformed pattern, store or pattern file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Origin(Enum):
    NEW = "New"
    OLD = "Old"


def check_symbol(sym: str) -> Symbol:
    if not isinstance(sym, str) or not sym or _WS.search(sym):
        raise PatternError(f"invalid symbol {sym!r}")
    return sym


def symbols(text: str | Iterable[str]) -> tuple[Symbol, ...]:
    """Split whitespace-separated text (or validate an iterable) into symbols."""
    items = text.split() if isinstance(text, str) else list(text)
    return tuple(check_symbol(s) for s in items)


@dataclass(frozen=True)
class Pattern:
    id: str
    symbols: tuple[Symbol, ...]
    frequency: int = 1
    origin: Origin = Origin.OLD

    def __post_init__(self):
        object.__setattr__(self, "symbols", symbols(self.symbols))
        if not self.symbols:
            raise PatternError(f"pattern {self.id!r} has no symbols")
        if int(self.frequency) != self.frequency or self.frequency < 1:
            raise PatternError(f"pattern {self.id!r}: frequency must be a positive integer")

    @classmethod
    def new(cls, text: str | Iterable[str], id: str = "new") -> "Pattern":
        return cls(id, symbols(text), 1, Origin.NEW)

    @classmethod
    def old(cls, id: str, text: str | Iterable[str], frequency: int = 1) -> "Pattern":
        return cls(id, symbols(text), frequency, Origin.OLD)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def is_bracketed(self) -> bool:
        """True for ``X ... #X`` patterns, the only kind that can fill a slot."""
        return len(self.symbols) >= 2 and self.symbols[-1] == "#" + self.symbols[0]

    def text(self) -> str:
        return " ".join(self.symbols)

    def with_frequency(self, frequency: int) -> "Pattern":
        return Pattern(self.id, self.symbols, frequency, self.origin)


class OldStore:
    """Immutable collection of Old patterns plus derived symbol statistics.

    Symbol frequency is the number of occurrences of the symbol across all
    patterns, each pattern weighted by its own frequency.
    """

    def __init__(self, patterns: Iterable[Pattern] = ()):
        pats = tuple(patterns)
        ids = set()
        for p in pats:
            if p.origin is not Origin.OLD:
                raise PatternError(f"pattern {p.id!r} is not an Old pattern")
            if p.id in ids:
                raise PatternError(f"duplicate pattern id {p.id!r}")
            ids.add(p.id)
        self._patterns = pats
        self._by_id = {p.id: p for p in pats}
        counts: Counter[str] = Counter()
        for p in pats:
            for s in p.symbols:
                counts[s] += p.frequency
        self._symbol_freq = dict(counts)
        self._total_symbols = sum(counts.values())
        self._total_pattern_freq = sum(p.frequency for p in pats)
        cats: Counter[str] = Counter()
        for p in pats:
            if p.is_bracketed:
                cats[p.symbols[0]] += p.frequency
        self._category_freq = dict(cats)
        self._bits_cache: dict[str, float] = {}

    @classmethod
    def from_text(cls, text: str) -> "OldStore":
        return cls(parse_patterns(text))

    @classmethod
    def load(cls, path: str | Path) -> "OldStore":
        return cls(parse_patterns(Path(path).read_text(encoding="utf-8")))

    # container protocol
    def __len__(self) -> int:
        return len(self._patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self._patterns)

    def __contains__(self, pid: object) -> bool:
        return pid in self._by_id

    def __getitem__(self, pid: str) -> Pattern:
        return self._by_id[pid]

    @property
    def patterns(self) -> tuple[Pattern, ...]:
        return self._patterns

    @property
    def alphabet(self) -> frozenset[Symbol]:
        return frozenset(self._symbol_freq)

    @property
    def total_pattern_frequency(self) -> int:
        return self._total_pattern_freq

    def symbol_frequency(self, sym: Symbol) -> int:
        return self._symbol_freq.get(sym, 0)

    def symbol_bits(self, sym: Symbol) -> float:
        """Shannon cost of a symbol; unknown symbols pay an escape code."""
        bits = self._bits_cache.get(sym)
        if bits is None:
            f = self._symbol_freq.get(sym, 0)
            if f == 0:
                bits = math.log2(len(self._symbol_freq) + 1)
            else:
                bits = -math.log2(f / self._total_symbols)
            self._bits_cache[sym] = bits
        return bits

    def sequence_bits(self, seq: Sequence[Symbol]) -> float:
        total = 0.0
        for s in seq:
            total += self.symbol_bits(s)
        return total

    def reference_bits(self, pid: str) -> float:
        return -math.log2(self._by_id[pid].frequency / self._total_pattern_freq)

    def category_reference_bits(self, pid: str) -> float:
        """Cost of naming a bracketed pattern once its category is known."""
        p = self._by_id[pid]
        return -math.log2(p.frequency / self._category_freq[p.symbols[0]])

    def replace(self, updated: Iterable[Pattern] = (), added: Iterable[Pattern] = ()) -> "OldStore":
        """Return a new store with some patterns swapped for updated copies."""
        upd = {p.id: p for p in updated}
        pats = [upd.pop(p.id, p) for p in self._patterns]
        if upd:
            raise PatternError(f"unknown pattern ids {sorted(upd)}")
        return OldStore([*pats, *added])

    def next_id(self, prefix: str = "p") -> str:
        n = len(self._patterns)
        while f"{prefix}{n}" in self._by_id:
            n += 1
        return f"{prefix}{n}"

    def to_text(self) -> str:
        return "".join(format_pattern(p) + "\n" for p in self._patterns)


def format_pattern(p: Pattern) -> str:
    line = p.text()
    if p.frequency != 1:
        line += f" *{p.frequency}"
    return line


_FREQ = re.compile(r"^\*(\d+)$")


def parse_patterns(text: str, prefix: str = "p") -> list[Pattern]:
    """Parse ``.sp`` text: one pattern per line, optional trailing ``*N``.

    Lines starting with ``#`` followed by whitespace (or a bare ``#``) are
    comments.  ``#X`` on its own is a symbol, so a comment needs the space.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "#" or line.startswith("# ") or line.startswith("#\t"):
            continue
        toks = line.split()
        freq = 1
        m = _FREQ.match(toks[-1])
        if m:
            freq = int(m.group(1))
            toks = toks[:-1]
            if freq < 1:
                raise PatternError("frequency must be >= 1", lineno)
        elif toks[-1].startswith("*"):
            raise PatternError(f"bad frequency marker {toks[-1]!r}", lineno)
        if not toks:
            raise PatternError("pattern has no symbols", lineno)
        if any(t.startswith("*") for t in toks):
            raise PatternError("frequency marker must be the last token", lineno)
        out.append(Pattern.old(f"{prefix}{len(out)}", toks, freq))
    return out


def read_symbols(path: str | Path) -> tuple[Symbol, ...]:
    return symbols(Path(path).read_text(encoding="utf-8"))


def as_new(seq: Sequence[Symbol] | Pattern | str) -> Pattern:
    if isinstance(seq, Pattern):
        if seq.origin is not Origin.NEW:
            return Pattern(seq.id, seq.symbols, 1, Origin.NEW)
        return seq
    return Pattern.new(seq)


__all__ = [
    "Symbol", "Pattern", "Origin", "OldStore", "PatternError",
    "symbols", "parse_patterns", "format_pattern", "read_symbols", "as_new",
]
