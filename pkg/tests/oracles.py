"""Independent reference implementations used by the tests.

Written from the model definitions only; they share no code with the
package beyond the data types.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np


# ---- flat alignment scoring -------------------------------------------------

def symbol_costs(patterns):
    """patterns: list of (symbols, freq). Returns a cost function."""
    counts = Counter()
    for syms, f in patterns:
        for s in syms:
            counts[s] += f
    total = sum(counts.values())
    escape = math.log2(len(counts) + 1)

    def cost(s):
        return -math.log2(counts[s] / total) if counts[s] else escape
    return cost


def coverage_masks(new, old):
    """Every set of New positions some order-preserving matching of old can cover."""
    masks = set()

    def walk(i, j, mask):
        masks.add(mask)
        for a in range(i, len(old)):
            for b in range(j, len(new)):
                if old[a] == new[b]:
                    walk(a + 1, b + 1, mask | (1 << b))
    walk(0, 0, 0)
    masks.discard(0)
    return masks


def best_saving(new, patterns):
    """Brute force over row subsets and per-row coverage masks.

    patterns: list of (symbols, freq) without bracket structure.
    """
    cost = symbol_costs(patterns)
    total_f = sum(f for _, f in patterns)
    bits = [cost(s) for s in new]
    raw = sum(bits)
    options = [sorted(coverage_masks(new, p)) for p, _ in patterns]
    best = 0.0
    idx = range(len(patterns))
    for k in range(1, len(patterns) + 1):
        for subset in itertools.combinations(idx, k):
            if any(not options[i] for i in subset):
                continue
            ref = sum(-math.log2(patterns[i][1] / total_f) + 2.0 for i in subset)
            for choice in itertools.product(*(options[i] for i in subset)):
                cov = 0
                for m in choice:
                    cov |= m
                enc = ref + sum(b for i, b in enumerate(bits) if not cov >> i & 1)
                best = max(best, raw - enc)
    return best


# ---- segmentation -----------------------------------------------------------

def segmentation_bits(units, alphabet_size):
    counts = Counter(tuple(u) for u in units)
    n = sum(counts.values())
    per = math.log2(alphabet_size + 1)
    lex = sum((len(u) + 1) * per for u in counts)
    data = 1.0 + sum(-math.log2(counts[tuple(u)] / n) + 1.0 for u in units)
    return lex + data


def all_segmentations(seq):
    n = len(seq)
    for cuts in itertools.product((0, 1), repeat=n - 1):
        units, start = [], 0
        for i, c in enumerate(cuts, 1):
            if c:
                units.append(tuple(seq[start:i]))
                start = i
        units.append(tuple(seq[start:]))
        yield units


def best_segmentation(seq):
    a = len(set(seq))
    return min(all_segmentations(seq), key=lambda u: segmentation_bits(u, a))


# ---- numerics ---------------------------------------------------------------

def grid_max(f, lo, hi, step):
    """Exhaustive grid search of a 2-D function; returns (point, value).

    Evaluated one grid row at a time so fine grids stay small in memory.
    """
    xs = np.arange(lo[0], hi[0] + step / 2, step)
    ys = np.arange(lo[1], hi[1] + step / 2, step)
    best_v, best_p = -np.inf, None
    for x in xs:
        vals = f(np.stack([np.full_like(ys, x), ys], axis=1))
        k = int(np.argmax(vals))
        if vals[k] > best_v:
            best_v, best_p = float(vals[k]), np.array([x, ys[k]])
    return best_p, best_v


def dense_likelihood(o, mean, U, lam):
    """exp(-lam * ||(I - U U^T)(o - mean)||^2 / n) with an explicit projector."""
    n = len(o)
    P = U @ U.T if U.size else np.zeros((n, n))
    r = (np.eye(n) - P) @ (o - mean)
    return math.exp(-lam * float(r @ r) / n)


def rect_overlap(a, b):
    """a, b: (x0, y0, w, h). Intersection area."""
    w = max(0.0, min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0]))
    h = max(0.0, min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1]))
    return w * h
