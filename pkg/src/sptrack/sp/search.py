"""Pairwise and multiple alignment search.

A multiple alignment is grown one Old row at a time.  Each extension aligns
a store pattern against the current unified structure (the column sequence)
with the k-best match-chain kernel, then rescores the whole alignment with
the bit model.  A beam of the best partial alignments is kept per round.
"""
from __future__ import annotations

from .. import _backend
from .alignment import (Alignment, extend_known, extension_links, initial_alignment,
                        make_key, rank_key, score_parts)
from .patterns import OldStore, Pattern, as_new

# local gains for matches that do not cover New symbols; only used to rank
# the candidate chains, every candidate is rescored with the bit model
UNIFY_GAIN = 1e-3
BOUNDARY_GAIN = 1e-3

DEFAULT_BEAM = 20
DEFAULT_ALTERNATIVES = 4


def _column_index(a: Alignment):
    cached = a.__dict__.get("_colidx")
    if cached is not None:
        return cached
    by_sym: dict[str, list[int]] = {}
    has_old = []
    has_new = []
    boundary = []
    for j, col in enumerate(a.columns):
        by_sym.setdefault(col.symbol, []).append(j)
        old = False
        new = False
        edge = False
        for r, p in col.cells:
            if r == 0:
                new = True
            else:
                old = True
                if p == 0 or p == len(a.rows[r]) - 1:
                    edge = True
        has_old.append(old)
        has_new.append(new)
        boundary.append(edge)
    cached = (by_sym, has_old, has_new, boundary)
    a.__dict__["_colidx"] = cached
    return cached


def _match_nodes(a: Alignment, pattern: Pattern, store: OldStore, structural: bool):
    by_sym, has_old, has_new, boundary = _column_index(a)
    last = len(pattern) - 1
    mi, mj, gain = [], [], []
    for i, s in enumerate(pattern.symbols):
        cols = by_sym.get(s)
        if not cols:
            continue
        for j in cols:
            if has_new[j] and not has_old[j]:
                g = store.symbol_bits(s)
            elif structural:
                g = UNIFY_GAIN
                if i == 0 or i == last or boundary[j]:
                    g += BOUNDARY_GAIN
            else:
                continue
            mi.append(i)
            mj.append(j)
            gain.append(g)
    return mi, mj, gain


def _candidates(a: Alignment, pattern: Pattern, store: OldStore, max_alternatives: int):
    """Unmaterialized extensions: key -> (score, path, covered, parents)."""
    kern = _backend.kernels
    out: dict = {}
    rows = a.rows + (pattern,)
    ids = [r.id for r in rows]
    for structural in (False, True):
        mi, mj, gain = _match_nodes(a, pattern, store, structural)
        if not mi:
            continue
        kept = 0
        for _, nodes in kern.kbest_paths(mi, mj, gain, 2 * max_alternatives):
            path = [(mi[n], mj[n]) for n in nodes]
            cov, par = extension_links(a, pattern, path)
            key = make_key(ids, cov, par)
            if key in out:
                continue
            out[key] = (score_parts(rows, cov, par, store), path, cov, par)
            kept += 1
            if kept >= max_alternatives:
                break
    return out


def extensions(a: Alignment, pattern: Pattern, store: OldStore,
               max_alternatives: int = DEFAULT_ALTERNATIVES) -> list[Alignment]:
    """Scored alignments adding ``pattern`` as one new row of ``a``.

    Two candidate families are searched: chains covering New symbols only,
    and chains that also unify with Old cells.  Up to ``max_alternatives``
    distinct structures of each family are returned.
    """
    return [extend_known(a, pattern, path, cov, par, sc)
            for sc, path, cov, par in _candidates(a, pattern, store, max_alternatives).values()]


def pairwise_align(new, old: Pattern, max_alternatives: int = DEFAULT_ALTERNATIVES,
                   store: OldStore | None = None) -> list[Alignment]:
    """Alternative alignments of one Old pattern against a New pattern.

    Scored against ``store`` (a one-pattern store holding ``old`` when
    omitted).  Sorted by saving, best first; empty when nothing matches.
    """
    new = as_new(new)
    if store is None:
        store = OldStore([old])
    start = initial_alignment(new, store)
    alts = extensions(start, old, store, max_alternatives)
    alts.sort(key=Alignment.rank_key)
    return alts[:max_alternatives]


def build_multiple_alignment(new, store: OldStore, beam_width: int = DEFAULT_BEAM,
                             max_rows: int | None = None,
                             max_alternatives: int = DEFAULT_ALTERNATIVES) -> list[Alignment]:
    """Ranked multiple alignments of ``new`` against the store.

    Every round extends each partial alignment in the beam by one unused
    store pattern; only extensions that raise the saving survive, and the
    ``beam_width`` best of them form the next beam.  Stops when nothing
    improves or ``max_rows`` Old rows are reached.  The result holds every
    alignment that survived a round plus the bare New alignment.
    """
    if beam_width < 1:
        raise ValueError("beam_width must be >= 1")
    new = as_new(new)
    start = initial_alignment(new, store)
    results = {start.key: start}
    if len(store) == 0:
        return [start]
    limit = len(store) if max_rows is None else max_rows
    beam = [start]
    while beam:
        cands: dict = {}
        for a in beam:
            if len(a.rows) - 1 >= limit:
                continue
            used = {r.id for r in a.rows[1:]}
            syms = _column_index(a)[0]
            floor = a.saving + 1e-9
            for p in store:
                if p.id in used or not any(s in syms for s in p.symbols):
                    continue
                for key, (sc, path, cov, par) in _candidates(a, p, store, max_alternatives).items():
                    if sc.saving <= floor or key in results or key in cands:
                        continue
                    cands[key] = (sc, len(a.rows), a, p, path, cov, par)
        if not cands:
            break
        ranked = sorted(cands.items(),
                        key=lambda kv: rank_key(kv[1][0].saving, kv[0]))
        beam = []
        for key, (sc, _, a, p, path, cov, par) in ranked[:beam_width]:
            ext = extend_known(a, p, path, cov, par, sc)
            beam.append(ext)
            results[key] = ext
    return sorted(results.values(), key=Alignment.rank_key)
