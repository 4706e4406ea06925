import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rect_overlap
from sptrack.pso import NoiseSchedule, agpso_step, init_swarm, sphere
from sptrack.tracker.appearance import AppearanceModel
from sptrack.tracker.competition import (box_of, compete, overlap_of, patch_mask, repulsion_force,
                                         snap_center)
from sptrack.tracker.species import repulsion_step


@pytest.mark.parametrize("ca, ea, cb, eb, want", [
    ((20, 20), (10, 10), (20, 20), (10, 10), 1.0),
    ((20, 20), (40, 40), (40, 20), (40, 40), 0.5),
    ((10, 10), (4, 4), (30, 30), (4, 4), None),
    ((10, 10), (4, 4), (14, 10), (4, 4), None),          # touching edges share nothing
    ((10, 10), (4, 4), (11, 11), (8, 8), 1.0),           # contained in the larger box
])
def test_overlap_fraction(ca, ea, cb, eb, want):
    ov = overlap_of(ca, ea, cb, eb)
    if want is None:
        assert ov is None
    else:
        assert ov.fraction == pytest.approx(want)


@settings(max_examples=60)
@given(st.tuples(st.floats(0, 50), st.floats(0, 50), st.integers(1, 20), st.integers(1, 20)),
       st.tuples(st.floats(0, 50), st.floats(0, 50), st.integers(1, 20), st.integers(1, 20)))
def test_overlap_matches_rectangles(a, b):
    ca = (a[0] + a[2] / 2, a[1] + a[3] / 2)
    cb = (b[0] + b[2] / 2, b[1] + b[3] / 2)
    ov = overlap_of(ca, a[2:], cb, b[2:])
    area = rect_overlap(a, b)
    if ov is None:
        assert area == pytest.approx(0.0, abs=1e-9)
    else:
        assert ov.fraction * min(a[2] * a[3], b[2] * b[3]) == pytest.approx(area)


def test_snap_and_mask():
    assert snap_center((10.3, 7.8), (4, 5)) == (10.0, 7.5)
    m = patch_mask((10.0, 10.0), (4, 4), box_of((12.0, 10.0), (4, 4)))
    assert m.reshape(4, 4).sum(axis=0).tolist() == [0, 0, 4, 4]


def one_pixel_models():
    """Model 1 reconstructs the patch exactly, model 2 misses one pixel by 1."""
    patch = np.linspace(0.0, 1.0, 16)
    m1 = AppearanceModel.from_patch(patch, 0)
    shifted = patch.copy()
    shifted[5] -= 1.0
    m2 = AppearanceModel.from_patch(shifted, 0)
    mask = np.zeros(16, bool)
    mask[[4, 5, 6]] = True
    return patch, m1, m2, mask


def test_residuals_zero_and_one():
    patch, m1, m2, mask = one_pixel_models()
    res = compete((1, 2), (patch, patch), (m1, m2), (mask, mask), lam=16.0)
    assert res.log_power == (0.0, -1.0)
    assert res.likelihood[0] == pytest.approx(1 / (1 + math.exp(-1)), abs=1e-12)
    assert res.winner == 1


def test_symmetric_tie_goes_to_lower_id():
    patch, m1, _, mask = one_pixel_models()
    res = compete((7, 3), (patch, patch), (m1, m1), (mask, mask), 8.0)
    assert res.likelihood == (0.5, 0.5) and res.winner == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 500.0))
def test_likelihoods_sum_to_one(seed, lam):
    rng = np.random.default_rng(seed)
    ms = [AppearanceModel.from_patch(rng.random(9) * 3, 0) for _ in range(2)]
    masks = [rng.random(9) < 0.6 for _ in range(2)]
    for m in masks:
        m[0] = True
    p = rng.random(9)
    res = compete((1, 2), (p, p), ms, masks, lam)
    assert abs(sum(res.likelihood) - 1.0) <= 1e-12
    assert all(0.0 <= x <= 1.0 for x in res.likelihood)


def test_empty_overlap_rejected():
    patch, m1, m2, mask = one_pixel_models()
    with pytest.raises(ValueError):
        compete((1, 2), (patch, patch), (m1, m2), (mask, np.zeros(16, bool)), 8.0)


def test_half_overlap_force():
    ov = overlap_of((40, 40), (40, 40), (20, 40), (40, 40))
    F = repulsion_force((40, 40), (20, 40), ov.fraction, 4.0)
    assert np.linalg.norm(F) == pytest.approx(2.0) and F[0] > 0 and F[1] == 0


def test_coincident_centres_no_force():
    assert np.array_equal(repulsion_force((5, 5), (5, 5), 1.0, 4.0), np.zeros(2))


def start(seed):
    rng = np.random.default_rng(seed)
    return init_swarm(sphere, np.full(2, -5.0), np.full(2, 5.0), 8, rng, vectorized=True), rng


def test_zero_fraction_is_plain_step():
    sched = NoiseSchedule([0.1, 0.1], 0.05)
    s1, r1 = start(4)
    s2, r2 = start(4)
    a = repulsion_step(s1, sphere, sched, r1, (0.0, 0.0), 0.0, 4.0)
    b = agpso_step(s2, sphere, sched, r2, vectorized=True)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.v, b.v)


def test_repulsion_replay():
    """Positions recomputed from the recorded draws with the push term."""
    sched = NoiseSchedule([0.1, 0.1], 0.05)
    s, rng = start(9)
    occ = np.array([-1.0, 0.5])
    out = repulsion_step(s, sphere, sched, rng, occ, 0.5, 4.0)
    g = s.gbest
    F = 4.0 * 0.5 * (g - occ) / np.linalg.norm(g - occ)
    for i, d in enumerate(out.draws):
        v = d.r1 * (s.pbest[i] - s.x[i]) + d.r2 * (g - s.x[i]) + d.eps + d.r3 * F
        v = np.clip(v, -s.v_max, s.v_max)
        x = np.clip(s.x[i] + v, s.lo, s.hi)
        assert np.allclose(out.x[i], x, atol=1e-15) and np.allclose(out.v[i], v, atol=1e-15)
