"""Reference fixtures shared by tests, the CLI and the benchmarks.

* ``kitten_grammar`` -- a small phrase-structure grammar with words and rules,
  plus the sentence ``t w o k i t t e n s p l a y``.
* ``body_grammar`` -- part-whole hierarchies for a human body and two other
  classes, over atomic feature symbols.
* ``donsvic_corpus`` -- an unsegmented corpus built from five known words.
* ``crossing_scenario`` -- two textured boxes crossing with known z-order.
"""
from __future__ import annotations

import numpy as np

from .sp.patterns import OldStore, Pattern

KITTEN_SENTENCE = "t w o k i t t e n s p l a y"

_KITTEN = [
    # rules
    ("S", "S NP #NP V #V #S", 20),
    ("S-tr", "S NP #NP V #V NP #NP #S", 8),
    ("NP", "NP D #D N #N #NP", 20),
    ("NP-bare", "NP N #N #NP", 8),
    ("N-pl", "N Np N Nr #N s #N", 10),
    ("V-pl", "V Vp Vr #Vr #V", 10),
    # words
    ("two", "D Dp 4 t w o #D", 1),
    ("one", "D Ds 1 o n e #D", 1),
    ("some", "D Dp 3 s o m e #D", 1),
    ("the", "D Dx 5 t h e #D", 2),
    ("kitten", "N Nr 5 k i t t e n #N", 1),
    ("puppy", "N Nr 6 p u p p y #N", 1),
    ("kite", "N Nr 7 k i t e #N", 1),
    ("boy", "N Nr 8 b o y #N", 1),
    ("girl", "N Nr 9 g i r l #N", 1),
    ("play", "Vr 1 p l a y #Vr", 1),
    ("run", "Vr 2 r u n #Vr", 1),
    ("sleep", "Vr 3 s l e e p #Vr", 1),
    ("jump", "Vr 4 j u m p #Vr", 1),
]

#: Old rows of the reference parse of the kitten sentence
KITTEN_PARSE = frozenset({"S", "NP", "two", "N-pl", "kitten", "V-pl", "play"})


def kitten_grammar() -> OldStore:
    return OldStore(Pattern.old(i, t, f) for i, t, f in _KITTEN)


_BODY = [
    # class roots: one bracketed slot per part
    ("person", "person H #H T #T A #A L #L #person", 6),
    ("dog", "dog DH #DH DB #DB DL #DL #dog", 4),
    ("car", "car CB #CB CW #CW #car", 4),
    # human parts
    ("head", "H 1 hair eyes nose mouth #H", 3),
    ("torso", "T 2 neck chest waist #T", 3),
    ("arms", "A 3 larm rarm lhand rhand #A", 3),
    ("legs", "L 4 lthigh rthigh lfoot rfoot #L", 3),
    # dog parts share some feature symbols with the human ones
    ("dog-head", "DH 5 ears eyes nose snout #DH", 2),
    ("dog-body", "DB 6 back tail #DB", 2),
    ("dog-legs", "DL 7 paw paw paw paw #DL", 2),
    # car parts
    ("car-body", "CB 8 hood roof trunk #CB", 2),
    ("car-wheels", "CW 9 wheel wheel #CW", 2),
]

BODY_STREAM = ("hair eyes nose mouth neck chest waist larm rarm lhand rhand "
               "lthigh rthigh lfoot rfoot").split()
LEG_SYMBOLS = ("lthigh", "rthigh", "lfoot", "rfoot")
BODY_ROOTS = frozenset({"person", "dog", "car"})


def body_grammar() -> OldStore:
    return OldStore(Pattern.old(i, t, f) for i, t, f in _BODY)


DONSVIC_WORDS = ("bako", "tilu", "gorapi", "mesu", "dunek")


def donsvic_corpus(seed: int = 0, length: int = 200, words=DONSVIC_WORDS):
    """Unsegmented corpus of ``length`` letters from a seeded word shuffle.

    Returns ``(symbols, boundaries)`` where ``boundaries`` holds the indices
    at which a true word starts (excluding 0).
    """
    rng = np.random.default_rng(seed)
    syms: list[str] = []
    bounds: list[int] = []
    while len(syms) < length:
        w = words[int(rng.integers(len(words)))]
        if syms:
            bounds.append(len(syms))
        syms.extend(w)
    syms = syms[:length]
    return syms, [b for b in bounds if b < length]
