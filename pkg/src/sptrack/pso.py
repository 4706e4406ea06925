"""Annealed Gaussian particle swarm optimization (maximization).

Velocity update, with no inertia by default::

    v <- |r1| (p - x) + |r2| (g - x) + eps,     eps ~ N(0, sigma0 * exp(-c n))
    x <- x + v

``r1`` and ``r2`` are standard normal draws.  Velocities are clamped to
``+-v_max`` and positions clipped to the search box.  An optional extra
force ``F`` adds ``|r3| F`` to the velocity; ``r3`` is drawn only when a
non-zero force is supplied, so a zero force leaves the random stream intact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Fitness = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class ParticleState:
    x: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class Particle:
    state: ParticleState
    pbest: np.ndarray
    pbest_fitness: float


@dataclass
class NoiseSchedule:
    """Diagonal disturbance covariance ``sigma0 * exp(-c n)``."""
    sigma0: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        self.sigma0 = np.atleast_1d(np.asarray(self.sigma0, dtype=float))
        if np.any(self.sigma0 < 0) or self.c < 0:
            raise ValueError("variances and annealing constant must be non-negative")

    def variance(self, n: int) -> np.ndarray:
        return self.sigma0 * np.exp(-self.c * n)

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.standard_normal(self.sigma0.shape) * np.sqrt(self.variance(n))


@dataclass
class StepDraw:
    r1: float
    r2: float
    eps: np.ndarray
    r3: float | None = None


@dataclass
class SwarmConfig:
    n_particles: int = 30
    n_max: int = 100
    c: float = 0.05
    bounds: tuple = ((-1.0, -1.0), (1.0, 1.0))
    sigma0: Sequence[float] | None = None   # default (extent / 100)^2 per dim
    v_max: Sequence[float] | None = None    # default 10% of each extent
    seed: int = 0
    inertia: float = 0.0

    def __post_init__(self):
        lo, hi = self.box
        if self.n_particles < 1 or self.n_max < 1:
            raise ValueError("n_particles and n_max must be >= 1")
        if lo.shape != hi.shape or lo.ndim != 1 or not np.all(hi > lo):
            raise ValueError("bounds must be a non-degenerate box")
        if np.any(self.velocity_limit <= 0):
            raise ValueError("v_max must be positive")

    @property
    def box(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.bounds
        return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.box[0])

    @property
    def velocity_limit(self) -> np.ndarray:
        lo, hi = self.box
        if self.v_max is None:
            return 0.1 * (hi - lo)
        return np.broadcast_to(np.asarray(self.v_max, dtype=float), lo.shape).copy()

    def schedule(self) -> NoiseSchedule:
        lo, hi = self.box
        s0 = ((hi - lo) / 100.0) ** 2 if self.sigma0 is None else self.sigma0
        return NoiseSchedule(np.broadcast_to(np.asarray(s0, dtype=float), lo.shape).copy(), self.c)


@dataclass
class Swarm:
    x: np.ndarray
    v: np.ndarray
    pbest: np.ndarray
    pbest_fitness: np.ndarray
    gbest: np.ndarray
    gbest_fitness: float
    lo: np.ndarray
    hi: np.ndarray
    v_max: np.ndarray
    iteration: int = 0
    rejected: int = 0
    inertia: float = 0.0
    # last step's random numbers: |r1|, |r2| (and |r3|) per row, then eps
    last_r: np.ndarray | None = field(default=None, repr=False)
    last_eps: np.ndarray | None = field(default=None, repr=False)

    @property
    def draws(self) -> list[StepDraw]:
        """The previous step's draws, one StepDraw per particle."""
        if self.last_r is None:
            return []
        return _as_stepdraws(self.last_r, self.last_eps)

    @property
    def size(self) -> int:
        return len(self.x)

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def particles(self) -> list[Particle]:
        return [Particle(ParticleState(self.x[i].copy(), self.v[i].copy()),
                         self.pbest[i].copy(), float(self.pbest_fitness[i]))
                for i in range(self.size)]

    def copy(self) -> "Swarm":
        return Swarm(self.x.copy(), self.v.copy(), self.pbest.copy(), self.pbest_fitness.copy(),
                     self.gbest.copy(), self.gbest_fitness, self.lo, self.hi, self.v_max,
                     self.iteration, self.rejected, self.inertia, self.last_r, self.last_eps)


def evaluate(fitness: Fitness, X: np.ndarray, vectorized: bool = False) -> np.ndarray:
    if vectorized:
        return np.asarray(fitness(X), dtype=float).reshape(len(X))
    return np.array([float(fitness(x)) for x in X])


def init_swarm(fitness: Fitness, lo, hi, n: int, rng: np.random.Generator, v_max=None,
               inertia: float = 0.0, vectorized: bool = False, region=None, anchor=None) -> Swarm:
    """Uniform positions in ``region`` (default the whole box), zero velocity.

    ``anchor`` replaces the first particle's position after the draws.
    Particles whose fitness is not finite get -inf as personal best.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    rlo, rhi = (lo, hi) if region is None else (np.maximum(region[0], lo), np.minimum(region[1], hi))
    x = rlo + rng.random((n, len(lo))) * (rhi - rlo)
    if anchor is not None:
        x[0] = np.clip(np.asarray(anchor, dtype=float), lo, hi)
    f = evaluate(fitness, x, vectorized)
    f = np.where(np.isfinite(f), f, -np.inf)
    k = int(np.argmax(f))
    vm = 0.1 * (hi - lo) if v_max is None else np.broadcast_to(np.asarray(v_max, float), lo.shape).copy()
    return Swarm(x, np.zeros_like(x), x.copy(), f, x[k].copy(), float(f[k]), lo, hi, vm,
                 inertia=inertia)


def _as_stepdraws(r: np.ndarray, eps: np.ndarray) -> list[StepDraw]:
    r3 = r.shape[1] > 2
    return [StepDraw(float(r[i, 0]), float(r[i, 1]), eps[i].copy(), float(r[i, 2]) if r3 else None)
            for i in range(len(r))]


def _draw_arrays(swarm: Swarm, schedule: NoiseSchedule, rng: np.random.Generator,
                 with_r3: bool = False) -> tuple[np.ndarray, np.ndarray]:
    # one block consumes the stream exactly like per-particle r1, r2, [r3], eps draws
    k = 3 if with_r3 else 2
    z = rng.standard_normal((swarm.size, k + swarm.dim))
    return np.abs(z[:, :k]), z[:, k:] * np.sqrt(schedule.variance(swarm.iteration))


def draw_step(swarm: Swarm, schedule: NoiseSchedule, rng: np.random.Generator,
              with_r3: bool = False) -> list[StepDraw]:
    """All random numbers of one step, in particle-index order."""
    return _as_stepdraws(*_draw_arrays(swarm, schedule, rng, with_r3))


def _move(swarm: Swarm, r: np.ndarray, eps: np.ndarray, force=None) -> tuple[np.ndarray, np.ndarray]:
    v = r[:, :1] * (swarm.pbest - swarm.x) + r[:, 1:2] * (swarm.gbest - swarm.x) + eps
    if swarm.inertia:
        v = v + swarm.inertia * swarm.v
    if force is not None and r.shape[1] > 2:
        v = v + r[:, 2:3] * np.asarray(force, dtype=float)
    v = np.clip(v, -swarm.v_max, swarm.v_max)
    x = np.clip(swarm.x + v, swarm.lo, swarm.hi)
    return x, v


def apply_draws(swarm: Swarm, draws: Sequence[StepDraw], force=None) -> tuple[np.ndarray, np.ndarray]:
    """Candidate (x, v) for every particle from pre-generated draws."""
    if not draws:
        return swarm.x.copy(), swarm.v.copy()
    cols = [[d.r1 for d in draws], [d.r2 for d in draws]]
    if draws[0].r3 is not None:
        cols.append([d.r3 for d in draws])
    r = np.array(cols, dtype=float).T
    eps = np.stack([np.asarray(d.eps, dtype=float) for d in draws])
    return _move(swarm, r, eps, force)


def agpso_step(swarm: Swarm, fitness: Fitness, schedule: NoiseSchedule,
               rng: np.random.Generator, force=None, vectorized: bool = False) -> Swarm:
    """One synchronous swarm update; returns a new Swarm.

    All particles see the global best from the start of the step.  A
    particle whose new fitness is not finite keeps its old x and v.
    """
    push = force is not None and np.any(np.asarray(force) != 0)
    r, eps = _draw_arrays(swarm, schedule, rng, with_r3=push)
    x, v = _move(swarm, r, eps, force if push else None)
    f = evaluate(fitness, x, vectorized)
    out = swarm.copy()
    out.last_r, out.last_eps = r, eps
    ok = np.isfinite(f)
    out.rejected += int((~ok).sum())
    out.x[ok] = x[ok]
    out.v[ok] = v[ok]
    better = ok & (f > out.pbest_fitness)
    out.pbest[better] = x[better]
    out.pbest_fitness[better] = f[better]
    if better.any():
        # first particle wins ties, as in a sequential scan
        i = int(np.argmax(np.where(better, f, -np.inf)))
        if f[i] > out.gbest_fitness:
            out.gbest = x[i].copy()
            out.gbest_fitness = float(f[i])
    out.iteration += 1
    return out


def optimize(fitness: Fitness, config: SwarmConfig, vectorized: bool = False,
             rng: np.random.Generator | None = None):
    """Run ``n_max`` steps from a uniform start; returns (best, fitness, trace).

    ``trace[n]`` is the global best fitness after ``n`` steps (``trace[0]`` is
    the initial swarm).
    """
    rng = np.random.default_rng(config.seed) if rng is None else rng
    lo, hi = config.box
    swarm = init_swarm(fitness, lo, hi, config.n_particles, rng, config.velocity_limit,
                       config.inertia, vectorized)
    sched = config.schedule()
    trace = [swarm.gbest_fitness]
    for _ in range(config.n_max):
        swarm = agpso_step(swarm, fitness, sched, rng, vectorized=vectorized)
        trace.append(swarm.gbest_fitness)
    return swarm.gbest.copy(), swarm.gbest_fitness, np.array(trace)


# benchmark problems, written as maximization targets over (N, D) arrays

def sphere(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    return -np.sum(X * X, axis=1)


def rosenbrock(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(X)
    a, b = X[:, :-1], X[:, 1:]
    return -np.sum(100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2, axis=1)


BENCHMARKS = {
    "sphere": (sphere, ((-2.0, -2.0), (2.0, 2.0))),
    "rosenbrock": (rosenbrock, ((-2.0, -2.0), (2.0, 2.0))),
}


__all__ = [
    "ParticleState", "Particle", "NoiseSchedule", "StepDraw", "SwarmConfig", "Swarm",
    "init_swarm", "draw_step", "apply_draws", "agpso_step", "optimize",
    "sphere", "rosenbrock", "BENCHMARKS",
]
