"""Frame rendering with per-pixel ownership and ground truth."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scenario import Scenario


@dataclass
class Frame:
    pixels: np.ndarray   # (H, W) in [0, 1]
    t: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape


@dataclass
class GroundTruth:
    t: int
    centers: dict                 # object id -> (cx, cy)
    extents: dict                 # object id -> (w, h)
    owner: np.ndarray             # (H, W) int, 0 = background
    visible: dict = field(default_factory=dict)    # object id -> (H, W) bool
    occluder: dict = field(default_factory=dict)   # object id -> id drawn over it, or None

    def box(self, k: int) -> tuple[float, float, float, float]:
        (cx, cy), (w, h) = self.centers[k], self.extents[k]
        return cx - w / 2, cy - h / 2, w, h


def render(scenario: Scenario, t: int) -> tuple[Frame, GroundTruth]:
    """Draw objects back to front, add seeded noise, clip to [0, 1]."""
    if not 0 <= t < scenario.frames:
        raise IndexError(f"frame {t} outside 0..{scenario.frames - 1}")
    H, W = scenario.height, scenario.width
    img = np.full((H, W), float(scenario.background))
    owner = np.zeros((H, W), dtype=np.int64)
    centers, extents, full = {}, {}, {}
    order = sorted(scenario.object_ids, key=lambda k: scenario.objects[k - 1].z)
    for k in order:
        o = scenario.objects[k - 1]
        w, h = o.extent
        x0, y0 = o.top_left(t)
        img[y0:y0 + h, x0:x0 + w] = o.template
        owner[y0:y0 + h, x0:x0 + w] = k
        m = np.zeros((H, W), dtype=bool)
        m[y0:y0 + h, x0:x0 + w] = True
        full[k] = m
        centers[k] = (x0 + w / 2, y0 + h / 2)
        extents[k] = (w, h)
    visible = {k: owner == k for k in scenario.object_ids}
    occluder = {}
    for k in scenario.object_ids:
        hidden = full[k] & ~visible[k]
        occluder[k] = int(np.bincount(owner[hidden]).argmax()) if hidden.any() else None
    if scenario.noise > 0:
        rng = np.random.default_rng([scenario.seed, t])
        img = np.clip(img + rng.normal(0.0, scenario.noise, size=img.shape), 0.0, 1.0)
    return Frame(img, t), GroundTruth(t, centers, extents, owner, visible, occluder)


def render_all(scenario: Scenario):
    for t in range(scenario.frames):
        yield render(scenario, t)
