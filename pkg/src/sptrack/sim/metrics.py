"""Tracking metrics: centre RMSE and failure counts with restarts.

A failure is a frame whose tracked box overlaps the true box (IoU) below
the threshold.  The failure frame and the next ``GRACE`` frames are excluded
from RMSE, after which the tracker counts as restarted at the truth.  For a
recorded trajectory that was not restarted, frames stay excluded until the
track overlaps the truth again, so a single long loss counts once.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GRACE = 5
OVERLAP_THRESHOLD = 0.65

TRACK_FIELDS = ["frame", "object_id", "cx", "cy", "likelihood", "occluded", "winner_flag"]


@dataclass
class TrackRow:
    frame: int
    object_id: int
    cx: float
    cy: float
    likelihood: float = 1.0
    occluded: int = 0
    winner_flag: int = 0


@dataclass
class EvalReport:
    rmse: dict                  # object id -> px
    failures: dict              # object id -> count
    failures_per_1000: dict     # object id -> failures per 1000 frames
    overlap: dict               # object id -> per-frame IoU array
    counted: dict = field(default_factory=dict)  # object id -> frames used for RMSE

    @property
    def mean_rmse(self) -> float:
        vals = [v for v in self.rmse.values() if not math.isnan(v)]
        return float(np.mean(vals)) if vals else float("nan")

    @property
    def mean_failures_per_1000(self) -> float:
        return float(np.mean(list(self.failures_per_1000.values()))) if self.failures_per_1000 else 0.0

    def to_text(self) -> str:
        lines = ["object_id,rmse,failures,failures_per_1000,counted_frames"]
        for k in sorted(self.rmse):
            lines.append(f"{k},{self.rmse[k]:.6f},{self.failures[k]},"
                         f"{self.failures_per_1000[k]:.6f},{self.counted[k]}")
        lines.append(f"mean,{self.mean_rmse:.6f},,{self.mean_failures_per_1000:.6f},")
        return "\n".join(lines) + "\n"


def iou(a, b) -> float:
    """Intersection over union of (x0, y0, w, h) boxes."""
    w = min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0])
    h = min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1])
    if w <= 0 or h <= 0:
        return 0.0
    inter = w * h
    return inter / (a[2] * a[3] + b[2] * b[3] - inter)


def write_tracks(rows, path=None) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(TRACK_FIELDS)
    for r in rows:
        wr.writerow([r.frame, r.object_id, repr(float(r.cx)), repr(float(r.cy)),
                     repr(float(r.likelihood)), int(r.occluded), int(r.winner_flag)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_tracks(src) -> list[TrackRow]:
    """Parse trajectory CSV from a path or text."""
    text = Path(src).read_text(encoding="utf-8") if isinstance(src, Path) or (
        isinstance(src, str) and "\n" not in src) else src
    rd = csv.DictReader(io.StringIO(text))
    missing = {"frame", "object_id", "cx", "cy"} - set(rd.fieldnames or ())
    if missing:
        raise ValueError(f"trajectory CSV lacks columns {sorted(missing)}")
    out = []
    for i, row in enumerate(rd, 2):
        try:
            out.append(TrackRow(int(row["frame"]), int(row["object_id"]), float(row["cx"]),
                                float(row["cy"]), float(row.get("likelihood") or 1.0),
                                int(row.get("occluded") or 0), int(row.get("winner_flag") or 0)))
        except (TypeError, ValueError):
            raise ValueError(f"line {i}: malformed trajectory row") from None
    return out


def evaluate(tracks, truth, threshold: float = OVERLAP_THRESHOLD, grace: int = GRACE) -> EvalReport:
    """Score trajectories against a list of per-frame GroundTruth.

    ``tracks`` is a list of TrackRow, or CSV text or path.
    """
    if not isinstance(tracks, list):
        tracks = read_tracks(tracks)
    frames = [g.t for g in truth]
    ids = sorted(truth[0].centers) if truth else []
    got = {(r.frame, r.object_id): r for r in tracks}
    want = {(t, k) for t in frames for k in ids}
    if set(got) != want or len(got) != len(tracks):
        extra = sorted(set(got) - want)[:3]
        lost = sorted(want - set(got))[:3]
        raise ValueError(f"tracks and truth disagree on frames/objects (extra {extra}, missing {lost})")
    rmse, fails, per1000, overlap, counted = {}, {}, {}, {}, {}
    for k in ids:
        sq = []
        ov = np.zeros(len(truth))
        n_fail = 0
        skip_until = -1
        lost = False
        for i, g in enumerate(truth):
            r = got[(g.t, k)]
            w, h = g.extents[k]
            box = (r.cx - w / 2, r.cy - h / 2, w, h)
            ov[i] = iou(box, g.box(k))
            good = ov[i] >= threshold
            if i <= skip_until:
                continue
            if lost:
                if not good:
                    continue
                lost = False
            if not good:
                n_fail += 1
                skip_until = i + grace
                lost = True
                continue
            dx, dy = r.cx - g.centers[k][0], r.cy - g.centers[k][1]
            sq.append(dx * dx + dy * dy)
        rmse[k] = math.sqrt(sum(sq) / len(sq)) if sq else float("nan")
        fails[k] = n_fail
        per1000[k] = 1000.0 * n_fail / len(truth) if truth else 0.0
        overlap[k] = ov
        counted[k] = len(sq)
    return EvalReport(rmse, fails, per1000, overlap, counted)
