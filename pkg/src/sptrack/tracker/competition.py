"""Overlap detection, competition for shared pixels and repulsion."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _backend


@dataclass(frozen=True)
class Overlap:
    fraction: float                # intersection / smaller box area
    rect: tuple                    # (x0, y0, x1, y1) in continuous coordinates


def box_of(center, extent) -> tuple[float, float, float, float]:
    (cx, cy), (w, h) = center, extent
    return cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2


def overlap_of(center_a, extent_a, center_b, extent_b) -> Overlap | None:
    a = box_of(center_a, extent_a)
    b = box_of(center_b, extent_b)
    x0, y0 = max(a[0], b[0]), max(a[1], b[1])
    x1, y1 = min(a[2], b[2]), min(a[3], b[3])
    if x1 <= x0 or y1 <= y0:
        return None
    inter = (x1 - x0) * (y1 - y0)
    small = min(extent_a[0] * extent_a[1], extent_b[0] * extent_b[1])
    return Overlap(inter / small, (x0, y0, x1, y1))


def snap_center(center, extent) -> tuple[float, float]:
    """Centre whose box starts on whole pixels; patches taken there are not blurred."""
    (cx, cy), (w, h) = center, extent
    return (math.floor(cx - w / 2 + 0.5) + w / 2, math.floor(cy - h / 2 + 0.5) + h / 2)


def detect_overlap(a, b) -> Overlap | None:
    """Overlap of two species' current boxes, or None when disjoint."""
    return overlap_of(a.center, a.extent, b.center, b.extent)


def patch_mask(center, extent, rect) -> np.ndarray:
    """Row-major mask of patch pixels whose centres fall inside ``rect``."""
    (cx, cy), (w, h) = center, extent
    xs = cx - w / 2 + np.arange(w) + 0.5
    ys = cy - h / 2 + np.arange(h) + 0.5
    mx = (xs >= rect[0]) & (xs < rect[2])
    my = (ys >= rect[1]) & (ys < rect[3])
    return (my[:, None] & mx[None, :]).ravel()


@dataclass(frozen=True)
class CompetitionResult:
    ids: tuple                 # (k1, k2)
    log_power: tuple           # exponents of the two powers
    likelihood: tuple          # interactive likelihoods, summing to 1
    winner: int

    @property
    def power(self) -> tuple:
        return tuple(math.exp(x) for x in self.log_power)


def compete(ids, patches, models, masks, lam: float) -> CompetitionResult:
    """Powers and interactive likelihoods of two species over their overlap.

    ``patches[i]`` is species i's full observed patch and ``masks[i]`` marks
    its overlap pixels.  Each patch is projected onto its own subspace; the
    power is set by the reconstruction residual on the overlap pixels,
    scaled by ``lam`` over the full patch size.
    """
    logs = []
    for i in range(2):
        m = np.asarray(masks[i], dtype=bool).ravel()
        if not m.any():
            raise ValueError("competition needs a non-empty overlap")
        r = models[i].residual(np.asarray(patches[i], dtype=float).ravel())[m]
        logs.append(-lam * float(r @ r) / models[i].n)
    # normalise in log space so tiny powers cannot underflow to 0/0
    gap = logs[1] - logs[0]
    l1 = 1.0 / (1.0 + math.exp(gap)) if gap < 700 else 0.0
    l2 = 1.0 - l1
    winner = ids[0] if l1 > l2 else ids[1] if l2 > l1 else min(ids)
    return CompetitionResult(tuple(ids), tuple(logs), (l1, l2), winner)


def competition(a, b, frame, lam: float = 8.0, centers=None) -> CompetitionResult:
    """Compete for the pixels shared by two species' boxes in ``frame``.

    ``centers`` optionally places the two boxes somewhere other than the
    species' stored centres, e.g. at positions predicted for this frame.
    """
    ca, cb = centers if centers is not None else (a.center, b.center)
    ov = overlap_of(ca, a.extent, cb, b.extent)
    if ov is None:
        raise ValueError("species do not overlap")
    image = frame.pixels if hasattr(frame, "pixels") else frame
    patches, masks = [], []
    for s, c in ((a, ca), (b, cb)):
        c = snap_center(c, s.extent)
        m = patch_mask(c, s.extent, ov.rect)
        if not m.any():
            raise ValueError("overlap covers no pixel centres")
        patches.append(_backend.kernels.sample_patches(image, np.array([c]), *s.extent)[0])
        masks.append(m)
    return compete((a.object_id, b.object_id), patches, (a.appearance, b.appearance), masks, lam)


def localize(image, species, center=None, radius: int = 1) -> tuple[float, float]:
    """Pixel-aligned centre within ``radius`` of ``center`` best explained by the model.

    Ties keep the candidate closest to the starting point.
    """
    image = image.pixels if hasattr(image, "pixels") else image
    cx, cy = snap_center(species.center if center is None else center, species.extent)
    H, W = image.shape
    w, h = species.extent
    offs = sorted(((dx, dy) for dx in range(-radius, radius + 1) for dy in range(-radius, radius + 1)),
                  key=lambda o: (abs(o[0]) + abs(o[1]), o[1], o[0]))
    X = np.array([(cx + dx, cy + dy) for dx, dy in offs], dtype=float)
    inside = ((X[:, 0] >= w / 2) & (X[:, 0] <= W - w / 2) & (X[:, 1] >= h / 2) & (X[:, 1] <= H - h / 2))
    X = X[inside] if inside.any() else X[:1]
    m = species.appearance
    r = _backend.kernels.sq_residuals(image, X, w, h, m.mean, m.basis)
    i = int(np.argmin(r))
    return float(X[i, 0]), float(X[i, 1])


def repulsion_force(loser_point, occluder_center, fraction: float, f_max: float) -> np.ndarray:
    """f_max * fraction along the unit vector from the occluder to the loser."""
    d = np.asarray(loser_point, dtype=float) - np.asarray(occluder_center, dtype=float)
    norm = float(np.hypot(*d))
    if norm == 0.0 or fraction <= 0.0:
        return np.zeros(2)
    return f_max * fraction * d / norm
