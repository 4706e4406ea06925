"""Unsupervised learning of Old patterns and corpus segmentation.

``derive_old`` turns one New pattern into store updates: rows the best
alignment matches completely are reinforced, and the stretches of New that
the store could not explain (or explained only partly) become new patterns.

``segment_corpus`` chunks an unsegmented corpus by repeated pair merging,
keeping a merge only when it shortens the total description length.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .sp.alignment import Alignment
from .sp.cost import segmentation_cost
from .sp.patterns import OldStore, Origin, Pattern, as_new, symbols
from .sp.search import DEFAULT_BEAM, build_multiple_alignment

MIN_SEGMENT = 2


@dataclass
class LearningEvent:
    source_new: Pattern
    created: list = field(default_factory=list)
    reinforced: list = field(default_factory=list)  # (pattern id, new frequency)

    def log_line(self) -> str:
        made = "; ".join(f"{p.id}={p.text()}" for p in self.created)
        more = "; ".join(f"{pid}={f}" for pid, f in self.reinforced)
        return f"created: {made} | reinforced: {more}"


def _runs(positions) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers as (start, stop)."""
    out = []
    for p in sorted(positions):
        if out and out[-1][1] == p:
            out[-1][1] = p + 1
        else:
            out.append([p, p + 1])
    return [(a, b) for a, b in out]


def _row_matches(a: Alignment, row: int) -> list[tuple[int, int]]:
    """(row position, New position) pairs of a row sharing columns with New."""
    out = []
    for col in a.columns:
        p = col.position(row)
        q = col.position(0)
        if p is not None and q is not None:
            out.append((p, q))
    return out


def _shared_segments(pairs) -> list[tuple[int, int]]:
    """New spans where both the row and New advance in lockstep."""
    segs = []
    start = None
    for k, (p, q) in enumerate(pairs):
        if start is not None and p == pairs[k - 1][0] + 1 and q == pairs[k - 1][1] + 1:
            continue
        if start is not None:
            segs.append((start, pairs[k - 1][1] + 1))
        start = q
    if start is not None:
        segs.append((start, pairs[-1][1] + 1))
    return segs


def derive_old(new, store: OldStore, beam_width: int = DEFAULT_BEAM,
               prefix: str = "p") -> tuple[LearningEvent, OldStore]:
    """Learn from one New pattern; returns the event and the updated store."""
    new = as_new(new)
    if new.origin is not Origin.NEW:
        raise ValueError("derive_old needs a New pattern")
    syms = new.symbols
    best = build_multiple_alignment(new, store, beam_width=beam_width)[0]
    bump: Counter[str] = Counter()
    segments: list[tuple[int, int]] = []
    if len(best.rows) == 1:
        segments.append((0, len(syms)))
    else:
        for r in range(1, len(best.rows)):
            pairs = _row_matches(best, r)
            if len(pairs) == len(best.rows[r]):
                bump[best.rows[r].id] += 1
            else:
                segments.extend(s for s in _shared_segments(pairs) if s[1] - s[0] >= MIN_SEGMENT)
        segments.extend(s for s in _runs(best.unmatched_new) if s[1] - s[0] >= MIN_SEGMENT)
    existing = {p.symbols: p.id for p in store}
    created: list[Pattern] = []
    made: set = set()
    n = len(store)
    for a, b in sorted(set(segments)):
        seg = syms[a:b]
        if seg in existing:
            bump[existing[seg]] += 1
            continue
        if seg in made:
            continue
        made.add(seg)
        pid = f"{prefix}{n}"
        while pid in store or any(p.id == pid for p in created):
            n += 1
            pid = f"{prefix}{n}"
        n += 1
        created.append(Pattern.old(pid, seg, 1))
    updated = [store[pid].with_frequency(store[pid].frequency + k) for pid, k in bump.items()]
    order = {p.id: i for i, p in enumerate(store)}
    updated.sort(key=lambda p: order[p.id])
    event = LearningEvent(new, created, [(p.id, p.frequency) for p in updated])
    return event, store.replace(updated, created)


@dataclass
class SegmentationResult:
    units: list
    lexicon: dict      # unit tuple -> count
    total_cost: float
    trace: list = field(default_factory=list)  # accepted costs, first entry unsegmented

    def boundaries(self) -> list[int]:
        """Corpus indices where a unit starts (excluding 0)."""
        out = []
        pos = 0
        for u in self.units[:-1]:
            pos += len(u)
            out.append(pos)
        return out


def _pair_counts(units) -> tuple[Counter, dict]:
    counts: Counter = Counter()
    first: dict = {}
    i = 0
    last_end = {}
    while i < len(units) - 1:
        pair = (units[i], units[i + 1])
        # count non-overlapping occurrences, scanning left to right
        if last_end.get(pair, -1) <= i:
            counts[pair] += 1
            first.setdefault(pair, i)
            last_end[pair] = i + 2
        i += 1
    return counts, first


def _merge(units, pair):
    out = []
    i = 0
    while i < len(units):
        if i < len(units) - 1 and units[i] == pair[0] and units[i + 1] == pair[1]:
            out.append(pair[0] + pair[1])
            i += 2
        else:
            out.append(units[i])
            i += 1
    return out


def segment_corpus(corpus: Sequence[str], max_unit_len: int = 8, rounds: int = 100) -> SegmentationResult:
    """Greedy MDL chunking by adjacent-pair merging.

    Each round tries pairs by decreasing frequency (at least 2, ties to the
    leftmost first occurrence) and accepts the first merge that strictly
    lowers the total cost.  Stops after ``rounds`` accepted merges or when no
    merge helps.
    """
    corpus = symbols(corpus)
    if len(corpus) < 2:
        raise ValueError("corpus needs at least 2 symbols")
    if max_unit_len < 2:
        raise ValueError("max_unit_len must be >= 2")
    alpha = len(set(corpus))
    units = [(s,) for s in corpus]
    cost = segmentation_cost(units, alpha)
    trace = [cost]
    for _ in range(rounds):
        counts, first = _pair_counts(units)
        cands = sorted((p for p, c in counts.items()
                        if c >= 2 and len(p[0]) + len(p[1]) <= max_unit_len),
                       key=lambda p: (-counts[p], first[p]))
        for pair in cands:
            merged = _merge(units, pair)
            c = segmentation_cost(merged, alpha)
            if c < cost - 1e-12:
                units, cost = merged, c
                trace.append(c)
                break
        else:
            break
    lexicon = dict(Counter(units))
    return SegmentationResult(units, lexicon, cost, trace)


def boundary_scores(found: Sequence[int], truth: Sequence[int]) -> tuple[float, float]:
    """Precision and recall of predicted unit boundaries."""
    f, t = set(found), set(truth)
    hit = len(f & t)
    precision = hit / len(f) if f else 0.0
    recall = hit / len(t) if t else 0.0
    return precision, recall


__all__ = ["LearningEvent", "derive_old", "SegmentationResult", "segment_corpus", "boundary_scores"]
