"""Multiple alignments, their compression score and text rendering.

An alignment stacks one New pattern (row 0) and any number of Old patterns
(rows 1..k) into columns.  Every symbol of every row sits in exactly one
column; a column holding two or more cells is a match and all its cells carry
the same symbol.

Bit model
---------
``raw_cost`` is the Shannon cost of the New symbols under store-wide symbol
frequencies.  ``encoded_cost`` charges, per Old row, a pattern reference plus
a 2-bit structure marker, and charges unmatched New symbols at the raw rate.

A bracketed Old row ``X ... #X`` whose first and last symbols are matched to
interior cells of another Old row fills a slot of that row.  Its boundaries
are then supplied by the parent, so it pays no marker and its reference is
coded within its category ``X`` only.  Without bracketed patterns this
reduces to the flat model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .patterns import OldStore, Origin, Pattern, Symbol

MARKER_BITS = 2.0


@dataclass(frozen=True)
class CompressionScore:
    raw_cost: float
    encoded_cost: float
    saving: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "saving", self.raw_cost - self.encoded_cost)


@dataclass(frozen=True)
class Column:
    cells: tuple[tuple[int, int], ...]  # (row, position), sorted by row
    symbol: Symbol

    @property
    def matched(self) -> bool:
        return len(self.cells) > 1

    @property
    def unified_symbol(self) -> Symbol | None:
        return self.symbol if len(self.cells) > 1 else None

    def position(self, row: int) -> int | None:
        for r, p in self.cells:
            if r == row:
                return p
        return None

    def rows(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.cells)


class Alignment:
    """Immutable multiple alignment; ``score`` is filled by the builders."""

    def __init__(self, rows: Sequence[Pattern], columns: Sequence[Column],
                 score: CompressionScore | None = None):
        self.rows = tuple(rows)
        self.columns = tuple(columns)
        self.score = score

    def __repr__(self) -> str:
        ids = ",".join(r.id for r in self.rows[1:])
        s = f"{self.score.saving:.3f}" if self.score else "?"
        return f"Alignment(old=[{ids}], saving={s})"

    @property
    def new(self) -> Pattern:
        return self.rows[0]

    @property
    def old_rows(self) -> tuple[Pattern, ...]:
        return self.rows[1:]

    @property
    def saving(self) -> float:
        return self.score.saving if self.score is not None else 0.0

    @cached_property
    def column_of(self) -> tuple[tuple[int, ...], ...]:
        """column_of[row][pos] -> column index."""
        out = [[-1] * len(r) for r in self.rows]
        for c, col in enumerate(self.columns):
            for r, p in col.cells:
                out[r][p] = c
        return tuple(tuple(x) for x in out)

    @cached_property
    def covered(self) -> frozenset[int]:
        """New positions sharing a column with at least one Old cell."""
        cov = set()
        for col in self.columns:
            if col.matched:
                p = col.position(0)
                if p is not None:
                    cov.add(p)
        return frozenset(cov)

    @property
    def unmatched_new(self) -> tuple[int, ...]:
        cov = self.covered
        return tuple(i for i in range(len(self.new)) if i not in cov)

    @cached_property
    def parents(self) -> dict[int, int]:
        """Slot-filling relation: row -> parent row (Old rows only)."""
        out: dict[int, int] = {}
        cof = self.column_of
        for r in range(1, len(self.rows)):
            pat = self.rows[r]
            if not pat.is_bracketed:
                continue
            first = self.columns[cof[r][0]]
            last = self.columns[cof[r][-1]]
            for q, pq in first.cells:
                if q == 0 or q == r or not 0 < pq < len(self.rows[q]) - 1:
                    continue
                pl = last.position(q)
                if pl is not None and 0 < pl < len(self.rows[q]) - 1:
                    out[r] = q
                    break
        return out

    @cached_property
    def key(self):
        """Score-relevant identity: row ids, covered New positions, slot links.

        Alignments differing only in how Old symbols unify outside slots
        share a key; they have the same score.
        """
        return make_key([r.id for r in self.rows], self.covered, self.parents)

    def rank_key(self):
        """Sort key: saving desc, fewer Old rows, smaller id list, fewer fragments."""
        return rank_key(self.saving, self.key)


def fragments(covered) -> int:
    """Number of maximal runs of consecutive covered New positions."""
    return sum(1 for p in covered if p - 1 not in covered)


def rank_key(saving: float, key):
    ids, cov, links = key
    return (-round(saving, 9), len(ids), ids, fragments(set(cov)), cov, links)


def make_key(ids, covered, parents):
    links = tuple(sorted((ids[c], ids[p]) for c, p in parents.items()))
    return (tuple(sorted(ids[1:])), tuple(sorted(covered)), links)


def initial_alignment(new: Pattern, store: OldStore | None = None) -> Alignment:
    cols = [Column(((0, i),), s) for i, s in enumerate(new.symbols)]
    a = Alignment((new,), cols)
    if store is not None:
        a.score = score_alignment(a, store)
    return a


def extend(a: Alignment, pattern: Pattern, path: Sequence[tuple[int, int]]) -> Alignment:
    """Add ``pattern`` as a new row, matching (pattern_pos, column) pairs.

    Unmatched pattern symbols get fresh columns: leading ones just before the
    first matched column, later ones just after the preceding matched column.
    """
    if not path:
        raise ValueError("an extension needs at least one matched column")
    row = len(a.rows)
    cols = list(a.columns)
    matched = dict()
    for i, j in path:
        matched[j] = i
    before: dict[int, list[int]] = {}
    after: dict[int, list[int]] = {}
    i0, j0 = path[0]
    before[j0] = list(range(i0))
    for (ia, ja), (ib, _) in zip(path, path[1:]):
        after[ja] = list(range(ia + 1, ib))
    il, jl = path[-1]
    after[jl] = list(range(il + 1, len(pattern)))
    out = []
    syms = pattern.symbols
    cov = set(a.covered)
    for j, col in enumerate(cols):
        for i in before.get(j, ()):
            out.append(Column(((row, i),), syms[i]))
        if j in matched:
            i = matched[j]
            if syms[i] != col.symbol:
                raise ValueError(f"symbol mismatch at column {j}: {syms[i]!r} vs {col.symbol!r}")
            out.append(Column(col.cells + ((row, i),), col.symbol))
            if col.cells[0][0] == 0:
                cov.add(col.cells[0][1])
        else:
            out.append(col)
        for i in after.get(j, ()):
            out.append(Column(((row, i),), syms[i]))
    ext = Alignment(a.rows + (pattern,), out)
    ext.__dict__["covered"] = frozenset(cov)
    return ext


def extend_known(a: Alignment, pattern: Pattern, path, covered, parents,
                 score: CompressionScore | None = None) -> Alignment:
    """:func:`extend` with precomputed ``covered`` and ``parents``."""
    ext = extend(a, pattern, path)
    ext.__dict__["covered"] = covered
    ext.__dict__["parents"] = parents
    ext.score = score
    return ext


def score_alignment(a: Alignment, store: OldStore) -> CompressionScore:
    return score_parts(a.rows, a.covered, a.parents, store)


def score_parts(rows, covered, parents, store: OldStore) -> CompressionScore:
    """Bit-model score from the rows, covered New positions and slot links."""
    new_syms = rows[0].symbols
    raw = store.sequence_bits(new_syms)
    row_costs = []
    for r in range(1, len(rows)):
        pid = rows[r].id
        if r in parents:
            cost = store.category_reference_bits(pid)
        else:
            cost = store.reference_bits(pid) + MARKER_BITS
        row_costs.append((pid, cost))
    enc = 0.0
    for _, cost in sorted(row_costs):
        enc += cost
    for i, s in enumerate(new_syms):
        if i not in covered:
            enc += store.symbol_bits(s)
    return CompressionScore(raw, enc)


def extension_links(a: Alignment, pattern: Pattern, path) -> tuple[frozenset, dict]:
    """Covered New positions and slot links after adding ``pattern`` by ``path``.

    Matches :func:`extend` followed by the ``covered``/``parents`` properties,
    without building the column list.
    """
    row = len(a.rows)
    cols = a.columns
    cov = set(a.covered)
    at = {}
    for i, j in path:
        at[j] = i
        c0 = cols[j].cells[0]
        if c0[0] == 0:
            cov.add(c0[1])
    parents = dict(a.parents)
    last = len(pattern) - 1
    if pattern.is_bracketed and path[0][0] == 0 and path[-1][0] == last:
        jf, jl = path[0][1], path[-1][1]
        lastcol = cols[jl]
        for q, pq in cols[jf].cells:
            if q == 0 or not 0 < pq < len(a.rows[q]) - 1:
                continue
            pl = lastcol.position(q)
            if pl is not None and 0 < pl < len(a.rows[q]) - 1:
                parents[row] = q
                break
    cof = a.column_of
    for x in range(1, row):
        if x in parents or not a.rows[x].is_bracketed:
            continue
        i0 = at.get(cof[x][0])
        i1 = at.get(cof[x][-1])
        if i0 is not None and i1 is not None and 0 < i0 <= last - 1 and 0 < i1 <= last - 1:
            parents[x] = row
    return frozenset(cov), parents


def scored(a: Alignment, store: OldStore) -> Alignment:
    a.score = score_alignment(a, store)
    return a


class AlignmentError(AssertionError):
    """An alignment violates a structural invariant."""


def check_alignment(a: Alignment) -> None:
    """Raise AlignmentError unless every structural invariant holds."""
    if not a.rows or a.rows[0].origin is not Origin.NEW:
        raise AlignmentError("row 0 must be the New pattern")
    for r in a.rows[1:]:
        if r.origin is not Origin.OLD:
            raise AlignmentError(f"row {r.id} is not Old")
    seen = [[0] * len(r) for r in a.rows]
    last = [-1] * len(a.rows)
    for c, col in enumerate(a.columns):
        rows = [r for r, _ in col.cells]
        if len(set(rows)) != len(rows):
            raise AlignmentError(f"column {c} has two cells of one row")
        for r, p in col.cells:
            if a.rows[r].symbols[p] != col.symbol:
                raise AlignmentError(f"column {c} mixes symbols")
            if p <= last[r]:
                raise AlignmentError(f"row {r} positions not increasing at column {c}")
            last[r] = p
            seen[r][p] += 1
    for r, counts in enumerate(seen):
        if any(n != 1 for n in counts):
            raise AlignmentError(f"row {r} symbols not each in exactly one column")


def format_grid(a: Alignment) -> str:
    """Text grid: one line per row, symbols in shared columns."""
    widths = [max(len(col.symbol), 1) for col in a.columns]
    lines = []
    label_w = len(str(len(a.rows) - 1))
    for r in range(len(a.rows)):
        cells = []
        bars = []
        for col, w in zip(a.columns, widths):
            p = col.position(r)
            cells.append((col.symbol if p is not None else "").ljust(w))
        lines.append(f"{str(r).rjust(label_w)}  " + " ".join(cells).rstrip() + f"    {a.rows[r].id}")
        if r == 0:
            for col, w in zip(a.columns, widths):
                bars.append(("|" if col.matched and col.position(0) is not None else "").ljust(w))
            bar = " ".join(bars).rstrip()
            if bar:
                lines.append(" " * (label_w + 2) + bar)
    return "\n".join(lines)


def format_block(a: Alignment) -> str:
    """Machine-readable description: row lines plus the score line."""
    lines = []
    cof = a.column_of
    for r, pat in enumerate(a.rows):
        cells = " ".join(f"{c}:{p}" for p, c in enumerate(cof[r]))
        lines.append(f"row {r}: {pat.id} {cells}")
    if a.score is not None:
        s = a.score
        lines.append(f"score: raw={s.raw_cost:.6f} encoded={s.encoded_cost:.6f} saving={s.saving:.6f}")
    return "\n".join(lines)


def parse_block(text: str) -> list[tuple[str, list[tuple[int, int]]]]:
    """Inverse of the row lines of :func:`format_block` -> (id, [(col, pos)])."""
    rows = []
    for line in text.splitlines():
        if not line.startswith("row "):
            continue
        head, rest = line.split(":", 1)
        toks = rest.split()
        cells = [tuple(int(x) for x in t.split(":")) for t in toks[1:]]
        rows.append((toks[0], [(c, p) for c, p in cells]))
    return rows


def rows_by_id(a: Alignment) -> dict[str, int]:
    return {p.id: i for i, p in enumerate(a.rows)}


def bound_span(a: Alignment, row: int) -> tuple[int, ...]:
    """New positions matched by ``row`` or by rows filling its slots."""
    kids: dict[int, list[int]] = {}
    for c, p in a.parents.items():
        kids.setdefault(p, []).append(c)
    todo = [row]
    rows: set[int] = set()
    while todo:
        r = todo.pop()
        if r in rows:
            continue
        rows.add(r)
        todo.extend(kids.get(r, ()))
    out = set()
    for col in a.columns:
        p0 = col.position(0)
        if p0 is not None and any(r in rows for r, _ in col.cells if r != 0):
            out.add(p0)
    return tuple(sorted(out))
