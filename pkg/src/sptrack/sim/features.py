"""Template detectors turning a frame into a symbol stream."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _backend


@dataclass
class Detector:
    template: np.ndarray
    threshold: float
    symbol: str


def detections(image: np.ndarray, det: Detector) -> list[tuple[int, int, float]]:
    """(row, col, score) of one detector after non-maximum suppression.

    Peaks closer than half the template width to a stronger kept peak
    (ties broken by position) are dropped.
    """
    image = np.asarray(image, dtype=float)
    th, tw = det.template.shape
    if th > image.shape[0] or tw > image.shape[1]:
        raise ValueError("detector template larger than frame")
    score = _backend.kernels.ncc_map(image, det.template)
    rr, cc = np.nonzero(score >= det.threshold)
    cand = sorted(zip(rr.tolist(), cc.tolist()), key=lambda rc: (-score[rc], rc))
    radius = tw / 2.0
    kept: list[tuple[int, int, float]] = []
    for r, c in cand:
        if all(max(abs(r - r2), abs(c - c2)) >= radius for r2, c2, _ in kept):
            kept.append((r, c, float(score[r, c])))
    return kept


def extract_symbols(frame, detectors) -> list[str]:
    """Detector symbols ordered by (row, column, detector index)."""
    image = frame.pixels if hasattr(frame, "pixels") else frame
    hits = []
    for k, det in enumerate(detectors):
        for r, c, _ in detections(image, det):
            hits.append((r, c, k, det.symbol))
    hits.sort()
    return [h[3] for h in hits]
