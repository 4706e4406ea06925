"""Description length of a corpus encoded through a lexicon of units.

The lexicon is treated as an Old store whose pattern frequencies are the
unit counts, so each unit occurrence costs its pattern-reference bits.  A
one-bit flag after every unit says whether another unit follows, and each
lexicon entry is spelled out symbol by symbol plus a terminator, at
``log2(|alphabet| + 1)`` bits per code.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from .patterns import OldStore, Pattern


def lexicon_store(units: Iterable[Sequence[str]]) -> OldStore:
    counts = Counter(tuple(u) for u in units)
    return OldStore(Pattern.old(f"u{i}", u, n) for i, (u, n) in enumerate(counts.items()))


def lexicon_bits(store: OldStore, alphabet_size: int) -> float:
    per = math.log2(alphabet_size + 1)
    return sum((len(p) + 1) * per for p in store)


def data_bits(units: Sequence[Sequence[str]], store: OldStore) -> float:
    by_syms = {p.symbols: p.id for p in store}
    total = 1.0  # final "no more units" flag
    for u in units:
        total += store.reference_bits(by_syms[tuple(u)]) + 1.0
    return total


def segmentation_cost(units: Sequence[Sequence[str]], alphabet_size: int | None = None) -> float:
    """Total bits: lexicon spelling plus the unit-reference stream."""
    units = [tuple(u) for u in units]
    if alphabet_size is None:
        alphabet_size = len({s for u in units for s in u})
    store = lexicon_store(units)
    return lexicon_bits(store, alphabet_size) + data_bits(units, store)
