import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_likelihood
from sptrack.tracker.appearance import (AppearanceModel, masked_residual, observation_likelihood,
                                        selective_update)


def model_from(samples, d=8):
    m = AppearanceModel.from_patch(samples[0], d)
    for s in samples[1:]:
        m = m.updated(s)
    return m


def test_in_span_is_one():
    rng = np.random.default_rng(0)
    m = model_from(list(rng.random((5, 16))))
    o = m.mean + m.basis @ np.array([0.3, -0.2, 0.1, 0.05, 0.0])[:m.d]
    assert observation_likelihood(o, m) == pytest.approx(1.0, abs=1e-12)


def test_empty_basis():
    m = AppearanceModel.from_patch(np.full(9, 0.5))
    assert m.d == 0
    assert observation_likelihood(np.full(9, 0.5), m) == 1.0
    o = np.full(9, 0.5)
    o[3] = 0.8
    assert observation_likelihood(o, m, lam=8.0) == pytest.approx(math.exp(-8.0 * 0.09 / 9))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.5, 20.0))
def test_matches_dense_projector(seed, lam):
    rng = np.random.default_rng(seed)
    m = model_from(list(rng.random((5, 12))))
    o = rng.random(12)
    want = dense_likelihood(o, m.mean, m.basis, lam)
    assert observation_likelihood(o, m, lam) == pytest.approx(want, rel=1e-10, abs=1e-10)


def test_basis_is_orthonormal():
    m = model_from(list(np.random.default_rng(1).random((7, 20))), d=4)
    assert m.d == 4
    assert np.allclose(m.basis.T @ m.basis, np.eye(4), atol=1e-12)


def test_window_slides():
    m = AppearanceModel.from_patch(np.zeros(4), 2, window_size=3)
    for k in range(5):
        m = m.updated(np.full(4, float(k + 1)))
    assert len(m.window) == 3 and m.samples_seen == 6
    assert np.allclose(m.mean, 4.0)


@pytest.mark.parametrize("bad", [np.zeros(5), np.zeros(3)])
def test_size_mismatch(bad):
    m = AppearanceModel.from_patch(np.zeros(4))
    with pytest.raises(ValueError):
        observation_likelihood(bad, m)
    with pytest.raises(ValueError):
        m.updated(bad)


def test_selective_update_hand_case():
    mean = np.linspace(0.2, 0.5, 16)
    m = AppearanceModel.from_patch(mean, 0)
    patch = mean.copy()
    mask = np.zeros(16, dtype=bool)
    mask[[1, 6, 9, 14]] = True
    # squared errors 0.01 and 0.04 pass tau = 0.05; 0.09 and 0.25 do not
    patch[[1, 6, 9, 14]] += [0.1, 0.2, 0.3, 0.5]
    patch[0] += 0.7               # outside the mask: always observed
    out = selective_update(m, patch, mask, tau=0.05)
    used = out.window[-1]
    assert np.array_equal(used[[1, 6]], patch[[1, 6]])
    assert np.array_equal(used[[9, 14]], mean[[9, 14]])
    assert used[0] == patch[0]


def test_selective_update_degenerate_cases():
    rng = np.random.default_rng(3)
    m = model_from(list(rng.random((3, 16))), 2)
    p = rng.random(16)
    plain = m.updated(p)
    for out in (selective_update(m, p, np.zeros(16, bool), 0.01),
                selective_update(m, p, np.ones(16, bool), math.inf)):
        assert np.array_equal(out.mean, plain.mean) and np.array_equal(out.basis, plain.basis)
    with pytest.raises(ValueError):
        selective_update(m, p, np.zeros(16, bool), 0.0)


def test_masked_residual_fits_visible_rows():
    rng = np.random.default_rng(4)
    m = model_from(list(rng.random((4, 10))), 3)
    o = m.mean + m.basis @ np.array([0.2, -0.1, 0.4])
    mask = np.arange(10) < 7
    assert np.allclose(masked_residual(o[mask], m, mask), 0.0, atol=1e-12)
