"""Synthetic scenarios: textured boxes moving along waypoint paths.

Scenario files are line-oriented::

    # comment
    size = 64x64
    frames = 120
    noise = 0.0
    seed = 3
    background = 0.1
    object: template=random extent=12x12 z=0 waypoints=(10,30)@0;(54,30)@119

Waypoints give box centres at frame indices; positions are linearly
interpolated and held constant before the first and after the last.
Templates are either ``random`` (seeded texture) or a PGM file path,
relative to the scenario file.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pgm import read_pgm


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class ObjectSpec:
    extent: tuple[int, int]                     # (w, h)
    waypoints: list                             # [(cx, cy, t), ...] sorted by t
    z: int = 0
    template: np.ndarray | None = None          # (h, w) in [0, 1]; None -> random
    template_source: str = "random"

    def center(self, t: float) -> tuple[float, float]:
        wp = self.waypoints
        if t <= wp[0][2]:
            return float(wp[0][0]), float(wp[0][1])
        for (x0, y0, t0), (x1, y1, t1) in zip(wp, wp[1:]):
            if t <= t1:
                a = (t - t0) / (t1 - t0)
                return float(x0 + a * (x1 - x0)), float(y0 + a * (y1 - y0))
        return float(wp[-1][0]), float(wp[-1][1])

    def top_left(self, t: float) -> tuple[int, int]:
        cx, cy = self.center(t)
        w, h = self.extent
        return int(np.floor(cx - w / 2 + 0.5)), int(np.floor(cy - h / 2 + 0.5))


@dataclass
class Scenario:
    width: int
    height: int
    frames: int
    objects: list = field(default_factory=list)
    noise: float = 0.0
    seed: int = 0
    background: float = 0.1

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.frames < 1:
            raise ScenarioError("size and frame count must be positive")
        zs = [o.z for o in self.objects]
        if len(set(zs)) != len(zs):
            raise ScenarioError("z-order must be a total order (distinct z values)")
        for k, o in enumerate(self.objects):
            w, h = o.extent
            if w < 1 or h < 1 or w > self.width or h > self.height:
                raise ScenarioError(f"object {k + 1}: bad extent {o.extent}")
            if not o.waypoints:
                raise ScenarioError(f"object {k + 1}: no waypoints")
            ts = [wp[2] for wp in o.waypoints]
            if ts != sorted(ts) or len(set(ts)) != len(ts):
                raise ScenarioError(f"object {k + 1}: waypoint times must increase")
            for t in range(self.frames):
                x0, y0 = o.top_left(t)
                if x0 < 0 or y0 < 0 or x0 + w > self.width or y0 + h > self.height:
                    raise ScenarioError(f"object {k + 1} leaves the frame at t={t}")
            if o.template is None:
                o.template = random_template(w, h, self.seed, k + 1)
            elif o.template.shape != (h, w):
                raise ScenarioError(f"object {k + 1}: template shape {o.template.shape} != {(h, w)}")

    @property
    def object_ids(self) -> list[int]:
        return list(range(1, len(self.objects) + 1))


def random_template(w: int, h: int, seed: int, object_id: int, block: int = 3) -> np.ndarray:
    """Blocky texture in [0.3, 1], fixed by (seed, object_id)."""
    rng = np.random.default_rng([seed, object_id, 7919])
    coarse = rng.uniform(0.3, 1.0, size=(h // block + 1, w // block + 1))
    return np.kron(coarse, np.ones((block, block)))[:h, :w].copy()


_WP = re.compile(r"^\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*@\s*(\d+)$")
_SIZE = re.compile(r"^(\d+)\s*x\s*(\d+)$")


def _size(text: str, lineno: int) -> tuple[int, int]:
    m = _SIZE.match(text.strip())
    if not m:
        raise ScenarioError(f"expected WxH, got {text!r}", lineno)
    return int(m.group(1)), int(m.group(2))


def _object(body: str, lineno: int, base: Path) -> ObjectSpec:
    fields = {}
    for tok in body.split():
        if "=" not in tok:
            raise ScenarioError(f"expected key=value, got {tok!r}", lineno)
        k, v = tok.split("=", 1)
        fields[k] = v
    unknown = set(fields) - {"template", "extent", "z", "waypoints"}
    if unknown:
        raise ScenarioError(f"unknown object fields {sorted(unknown)}", lineno)
    for k in ("extent", "waypoints"):
        if k not in fields:
            raise ScenarioError(f"object needs {k}=", lineno)
    extent = _size(fields["extent"], lineno)
    wps = []
    for part in fields["waypoints"].split(";"):
        if not part.strip():
            continue
        m = _WP.match(part.strip())
        if not m:
            raise ScenarioError(f"bad waypoint {part!r}", lineno)
        wps.append((float(m.group(1)), float(m.group(2)), int(m.group(3))))
    src = fields.get("template", "random")
    tmpl = None
    if src != "random":
        path = Path(src) if Path(src).is_absolute() else base / src
        try:
            tmpl = read_pgm(path)
        except OSError as e:
            raise ScenarioError(f"cannot read template {src!r}: {e}", lineno) from None
    try:
        z = int(fields.get("z", 0))
    except ValueError:
        raise ScenarioError(f"bad z {fields['z']!r}", lineno) from None
    return ObjectSpec(extent, wps, z, tmpl, src)


def parse_scenario(text: str, base: str | Path = ".") -> Scenario:
    base = Path(base)
    opts: dict = {}
    objects = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("object:"):
            objects.append(_object(line[len("object:"):], lineno, base))
            continue
        if "=" not in line:
            raise ScenarioError(f"expected key = value, got {line!r}", lineno)
        k, v = (s.strip() for s in line.split("=", 1))
        try:
            if k == "size":
                opts["width"], opts["height"] = _size(v, lineno)
            elif k == "frames":
                opts["frames"] = int(v)
            elif k == "noise":
                opts["noise"] = float(v)
            elif k == "seed":
                opts["seed"] = int(v)
            elif k == "background":
                opts["background"] = float(v)
            else:
                raise ScenarioError(f"unknown key {k!r}", lineno)
        except ValueError as e:
            if isinstance(e, ScenarioError):
                raise
            raise ScenarioError(f"bad value for {k}: {v!r}", lineno) from None
    for k in ("width", "frames"):
        if k not in opts:
            raise ScenarioError(f"missing {'size' if k == 'width' else k}")
    return Scenario(objects=objects, **opts)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), path.parent)


def format_scenario(s: Scenario) -> str:
    lines = [f"size = {s.width}x{s.height}", f"frames = {s.frames}", f"noise = {s.noise!r}",
             f"seed = {s.seed}", f"background = {s.background!r}"]
    for o in s.objects:
        wps = ";".join(f"({x:g},{y:g})@{t}" for x, y, t in o.waypoints)
        lines.append(f"object: template={o.template_source} extent={o.extent[0]}x{o.extent[1]} "
                     f"z={o.z} waypoints={wps}")
    return "\n".join(lines) + "\n"


def crossing_scenario(seed: int = 0, noise: float = 0.0, frames: int = 120,
                      size: int = 64, extent: int = 12, offset: float = 4.0) -> Scenario:
    """Two boxes swapping sides; object 2 passes in front of object 1."""
    y = size / 2
    lo, hi = extent / 2 + 4, size - extent / 2 - 4
    a = ObjectSpec((extent, extent), [(lo, y - offset / 2, 0), (hi, y - offset / 2, frames - 1)], z=0)
    b = ObjectSpec((extent, extent), [(hi, y + offset / 2, 0), (lo, y + offset / 2, frames - 1)], z=1)
    return Scenario(size, size, frames, [a, b], noise, seed)
