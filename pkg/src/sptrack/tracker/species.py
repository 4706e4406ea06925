"""Species-based multi-object tracking.

Every object owns a species: a particle swarm over its 2-D centre, an
appearance model and a private random generator keyed by (seed, object id).
Objects far apart are tracked independently.  When two boxes overlap by at
least ``overlap_threshold`` the pair competes once per frame for the shared
pixels; the loser's particles are pushed away from the winner and both
update their appearance selectively.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .. import _backend
from ..pso import NoiseSchedule, Swarm, SwarmConfig, agpso_step, init_swarm
from .appearance import AppearanceModel, selective_update
from .competition import (CompetitionResult, Overlap, box_of, competition, detect_overlap, localize,
                          overlap_of, patch_mask, repulsion_force, snap_center)


class Status(Enum):
    TRACKING = "tracking"
    OCCLUDED = "occluded"


def _tracker_swarm() -> SwarmConfig:
    return SwarmConfig(n_particles=30, n_max=15, c=0.15, bounds=((0.0, 0.0), (1.0, 1.0)),
                       sigma0=(0.5, 0.5), v_max=(3.0, 3.0))


@dataclass
class TrackerConfig:
    overlap_threshold: float = 0.01    # declare as soon as boxes share pixels
    recon_threshold: float = 0.01      # tau, per-pixel squared error
    lam: float = 8.0
    d: int = 4
    window: int = 16
    update_every: int = 1
    f_max: float = 2.0
    seed: int = 0
    swarm: SwarmConfig = field(default_factory=_tracker_swarm)

    def __post_init__(self):
        if not 0 < self.overlap_threshold <= 1:
            raise ValueError("overlap_threshold must be in (0, 1]")
        if self.recon_threshold <= 0 or self.lam <= 0:
            raise ValueError("recon_threshold and lam must be positive")
        if self.d < 0 or self.window < 1 or self.update_every < 1 or self.f_max < 0:
            raise ValueError("bad tracker configuration")

    @property
    def occlusion_enabled(self) -> bool:
        # a threshold of 1 is treated as "never declare occlusion"
        return self.overlap_threshold < 1.0


@dataclass
class Species:
    object_id: int
    center: tuple
    extent: tuple
    appearance: AppearanceModel
    rng: np.random.Generator = field(repr=False)
    status: Status = Status.TRACKING
    swarm: Swarm | None = field(default=None, repr=False)
    likelihood: float = 1.0
    frames: int = 0
    velocity: tuple = (0.0, 0.0)      # last per-frame displacement

    @property
    def predicted(self) -> tuple[float, float]:
        """Centre extrapolated one frame ahead at constant velocity."""
        return (self.center[0] + self.velocity[0], self.center[1] + self.velocity[1])


@dataclass
class FrameDiagnostics:
    object_id: int
    center: tuple
    likelihood: float
    occluded: bool = False
    winner: bool = False
    competition: CompetitionResult | None = None
    overlap: float = 0.0


def species_rng(seed: int, object_id: int) -> np.random.Generator:
    return np.random.default_rng([seed, object_id])


def _patch(image, center, extent) -> np.ndarray:
    center = snap_center(center, extent)
    return _backend.kernels.sample_patches(image, np.array([center], dtype=float), *extent)[0]


def init_species(frame, bboxes, config: TrackerConfig | None = None) -> list[Species]:
    """Species from (x0, y0, w, h) boxes; a dict keys boxes by object id."""
    config = config or TrackerConfig()
    image = frame.pixels if hasattr(frame, "pixels") else np.asarray(frame, dtype=float)
    H, W = image.shape
    items = sorted(bboxes.items()) if isinstance(bboxes, dict) else list(enumerate(bboxes, 1))
    seen = set()
    out = []
    for k, box in items:
        x0, y0, w, h = (float(v) for v in box)
        if w < 1 or h < 1 or int(w) != w or int(h) != h:
            raise ValueError(f"object {k}: box size must be positive integers")
        if x0 < 0 or y0 < 0 or x0 + w > W or y0 + h > H:
            raise ValueError(f"object {k}: box {box} outside the {W}x{H} frame")
        if (x0, y0, w, h) in seen:
            raise ValueError(f"object {k}: identical boxes cannot be told apart")
        seen.add((x0, y0, w, h))
        center = (x0 + w / 2, y0 + h / 2)
        extent = (int(w), int(h))
        model = AppearanceModel.from_patch(_patch(image, center, extent), config.d, config.window)
        sp = Species(k, center, extent, model, species_rng(config.seed, k))
        sp.swarm = _seed_swarm(sp, image, config)
        out.append(sp)
    return out


def _fitness(image, sp: Species, lam: float, ignore=None):
    """Particle fitness; ``ignore`` masks patch pixels left out of the residual."""
    w, h = sp.extent
    m = sp.appearance
    kern = _backend.kernels
    if ignore is None:
        def f(X):
            r = kern.sq_residuals(image, X, w, h, m.mean, m.basis)
            return np.exp(-lam * r / (w * h))
        return f
    keep = ~np.asarray(ignore, dtype=bool)

    def f(X):
        R = kern.sample_patches(image, X, w, h) - m.mean
        if m.d:
            R = R - (R @ m.basis) @ m.basis.T
        R = R[:, keep]
        return np.exp(-lam * np.einsum("ij,ij->i", R, R) / (w * h))
    return f


def _bounds(sp: Species, image) -> tuple[np.ndarray, np.ndarray]:
    H, W = image.shape
    w, h = sp.extent
    return np.array([w / 2, h / 2]), np.array([W - w / 2, H - h / 2])


def _seed_swarm(sp: Species, image, config: TrackerConfig, fitness=None) -> Swarm:
    lo, hi = _bounds(sp, image)
    c = np.asarray(sp.center, dtype=float)
    half = np.asarray(sp.extent, dtype=float) / 2
    fitness = fitness or _fitness(image, sp, config.lam)
    return init_swarm(fitness, lo, hi, config.swarm.n_particles, sp.rng,
                      config.swarm.velocity_limit, config.swarm.inertia, vectorized=True,
                      region=(c - half, c + half), anchor=c)


def repulsion_step(swarm: Swarm, fitness, schedule: NoiseSchedule, rng, occluder_center,
                   fraction: float, f_max: float) -> Swarm:
    """One swarm step with the loser pushed away from its occluder."""
    force = repulsion_force(swarm.gbest, occluder_center, fraction, f_max)
    return agpso_step(swarm, fitness, schedule, rng, force=force, vectorized=True)


def declared_occlusions(species, config: TrackerConfig) -> list[tuple[int, int, Overlap]]:
    """Index pairs (i, j) whose predicted boxes overlap by at least the threshold."""
    out = []
    if not config.occlusion_enabled:
        return out
    for i in range(len(species)):
        for j in range(i + 1, len(species)):
            a, b = species[i], species[j]
            ov = overlap_of(a.predicted, a.extent, b.predicted, b.extent)
            if ov is None or ov.fraction < config.overlap_threshold:
                continue
            # a sliver that covers no pixel centre leaves nothing to compete for
            if all(patch_mask(snap_center(s.predicted, s.extent), s.extent, ov.rect).any()
                   for s in (a, b)):
                out.append((i, j, ov))
    return out


def _worst_overlap(sp: Species, others, config: TrackerConfig) -> Overlap | None:
    """Largest declared overlap of ``sp`` with any other species at the new positions."""
    best = None
    if not config.occlusion_enabled:
        return best
    for o in others:
        if o.object_id == sp.object_id:
            continue
        ov = detect_overlap(sp, o)
        if ov is not None and ov.fraction >= config.overlap_threshold and (
                best is None or ov.fraction > best.fraction):
            best = ov
    return best


def track_frame(species: list, frame, config: TrackerConfig | None = None):
    """Advance every species by one frame.

    Returns the updated species (new objects; the inputs' generators are
    advanced) and one FrameDiagnostics per species.
    """
    config = config or TrackerConfig()
    image = frame.pixels if hasattr(frame, "pixels") else np.asarray(frame, dtype=float)
    pairs = declared_occlusions(species, config)
    push: dict[int, tuple] = {}
    diag = {sp.object_id: FrameDiagnostics(sp.object_id, sp.center, sp.likelihood) for sp in species}
    for i, j, ov in pairs:
        a, b = species[i], species[j]
        centers = (localize(image, a, a.predicted), localize(image, b, b.predicted))
        try:
            res = competition(a, b, image, config.lam, centers=centers)
        except ValueError:
            continue        # localized boxes no longer share a pixel
        loser, winner = (a, b) if res.winner == b.object_id else (b, a)
        # a species losing several competitions is pushed by its largest overlap
        if loser.object_id not in push or push[loser.object_id][1] < ov.fraction:
            push[loser.object_id] = (winner.object_id, ov.fraction,
                                     centers[0] if loser is a else centers[1])
        for s in (a, b):
            d = diag[s.object_id]
            d.occluded = True
            d.competition = res
            d.overlap = max(d.overlap, ov.fraction)
        diag[winner.object_id].winner = True
    sched = config.swarm.schedule()
    moved: dict[int, Species] = {}
    # losers go last so their hidden region follows the occluder's new box
    for sp in sorted(species, key=lambda s: s.object_id in push):
        hidden = None
        if sp.object_id in push:
            occ_id, frac, at = push[sp.object_id]
            # an occluder that itself lost elsewhere may not have moved yet
            occ = moved.get(occ_id) or next(s for s in species if s.object_id == occ_id)
            hidden = patch_mask(at, sp.extent, box_of(snap_center(occ.center, occ.extent), occ.extent))
        fit = _fitness(image, sp, config.lam, hidden)
        swarm = _seed_swarm(sp, image, config, fit)
        for _ in range(config.swarm.n_max):
            if hidden is not None:
                swarm = repulsion_step(swarm, fit, sched, sp.rng, occ.center, frac, config.f_max)
            else:
                swarm = agpso_step(swarm, fit, sched, sp.rng, vectorized=True)
        center = (float(swarm.gbest[0]), float(swarm.gbest[1]))
        status = Status.OCCLUDED if sp.object_id in push else Status.TRACKING
        step = (center[0] - sp.center[0], center[1] - sp.center[1])
        moved[sp.object_id] = replace(sp, center=center, swarm=swarm,
                                      likelihood=float(swarm.gbest_fitness),
                                      status=status, frames=sp.frames + 1, velocity=step)
    moved = [moved[sp.object_id] for sp in species]
    out = []
    for sp in moved:
        model = sp.appearance
        if sp.frames % config.update_every == 0:
            patch = _patch(image, sp.center, sp.extent)
            ov = _worst_overlap(sp, moved, config)
            if ov is not None:
                mask = patch_mask(snap_center(sp.center, sp.extent), sp.extent, ov.rect)
                model = selective_update(model, patch, mask, config.recon_threshold)
            else:
                model = model.updated(patch)
        out.append(replace(sp, appearance=model))
        d = diag[sp.object_id]
        d.center = sp.center
        d.likelihood = sp.likelihood
    return out, [diag[s.object_id] for s in out]


def restart(sp: Species, frame, center, config: TrackerConfig) -> Species:
    """Re-initialize a species at ``center``: fresh appearance model and swarm.

    The species keeps its random generator, so restarts stay reproducible.
    """
    image = frame.pixels if hasattr(frame, "pixels") else np.asarray(frame, dtype=float)
    center = (float(center[0]), float(center[1]))
    model = AppearanceModel.from_patch(_patch(image, center, sp.extent), config.d, config.window)
    out = replace(sp, center=center, appearance=model, status=Status.TRACKING, velocity=(0.0, 0.0))
    out.swarm = _seed_swarm(out, image, config)
    return out
