"""Recognition of part-whole hierarchies in a symbol stream.

A hierarchy root is a bracketed pattern whose interior holds slots such as
``H #H``.  A part is bound when some row filling that slot matches New
symbols; parts without evidence are reported as inferred.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .alignment import Alignment, bound_span
from .patterns import OldStore, Pattern, PatternError, as_new
from .search import DEFAULT_BEAM, build_multiple_alignment

INFERRED = "inferred"


@dataclass(frozen=True)
class Recognition:
    class_id: str
    bound_parts: dict = field(default_factory=dict)   # category -> (start, stop) or INFERRED
    confidence: float = 0.0
    alignment: Alignment | None = field(default=None, compare=False, repr=False)

    @property
    def inferred(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.bound_parts.items() if v == INFERRED)

    @property
    def bound(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.bound_parts.items() if v != INFERRED)


def slot_categories(root: Pattern) -> tuple[str, ...]:
    """Interior ``X ... #X`` pairs of a root pattern, in order."""
    inner = root.symbols[1:-1] if root.is_bracketed else root.symbols
    out = []
    for i, s in enumerate(inner):
        if s.startswith("#"):
            continue
        if "#" + s in inner[i + 1:] and s not in out:
            out.append(s)
    return tuple(out)


def _parts(a: Alignment, row: int, cats: Sequence[str]) -> dict:
    found: dict = {}
    for child in sorted(c for c, p in a.parents.items() if p == row):
        cat = a.rows[child].symbols[0]
        span = bound_span(a, child)
        if cat in cats and span and cat not in found:
            found[cat] = (span[0], span[-1] + 1)
    return {c: found.get(c, INFERRED) for c in cats}


def recognize(stream, store: OldStore, hierarchy_roots: Iterable[str],
              error_budget: int = 0, beam_width: int = DEFAULT_BEAM) -> list[Recognition]:
    """Recognized hierarchy roots, most confident first.

    For every root, the best-ranked alignment that uses it and no other root,
    binds at least one of its parts and leaves at most ``error_budget`` New
    symbols unmatched is reported.  Confidence is the alignment's saving over its raw cost.
    """
    roots = list(dict.fromkeys(hierarchy_roots))
    missing = [r for r in roots if r not in store]
    if missing:
        raise PatternError(f"unknown hierarchy roots {missing}")
    if error_budget < 0:
        raise ValueError("error_budget must be >= 0")
    new = as_new(stream)
    alignments = build_multiple_alignment(new, store, beam_width=beam_width)
    root_set = set(roots)
    out = []
    for rid in roots:
        cats = slot_categories(store[rid])
        for a in alignments:
            if len(a.unmatched_new) > error_budget:
                continue
            here = [i for i, p in enumerate(a.rows) if i > 0 and p.id in root_set]
            if len(here) != 1 or a.rows[here[0]].id != rid:
                continue
            row = here[0]
            parts = _parts(a, row, cats)
            if all(v == INFERRED for v in parts.values()):
                continue
            raw = a.score.raw_cost
            conf = min(max(a.saving / raw, 0.0), 1.0) if raw > 0 else 0.0
            out.append(Recognition(rid, parts, conf, a))
            break
    out.sort(key=lambda r: (-round(r.confidence, 12), r.class_id))
    return out


__all__ = ["Recognition", "recognize", "slot_categories", "INFERRED"]
