import json

import numpy as np
import pytest
from scipy.integrate import quad

from hillres.errors import ConfigError
from hillres.potentials import (
    CompactPotential,
    PeriodicPotential,
    constants,
    fourier_p,
    fourier_q,
    potentials_from_config,
)


def test_periodic_evaluation_and_mean():
    p = PeriodicPotential(1.5, (2.0, 0.0, -1.0), (0.5,))
    xs = np.linspace(0.0, 1.0, 7)
    expect = (1.5 + 2.0 * np.cos(2 * np.pi * xs) - np.cos(6 * np.pi * xs)
              + 0.5 * np.sin(2 * np.pi * xs))
    assert np.allclose(p(xs), expect, atol=1e-14)
    assert abs(p(0.3) - p(1.3)) < 1e-14


def test_fourier_p_matches_quadrature():
    p = PeriodicPotential(0.7, (1.3, -0.4), (0.9, 0.0, 0.2))
    for n in (1, 2, 3, 5):
        p0, pcn, psn = fourier_p(p, n)
        qc, _ = quad(lambda x: p(x) * np.cos(2 * np.pi * n * x), 0, 1, limit=200)
        qs, _ = quad(lambda x: p(x) * np.sin(2 * np.pi * n * x), 0, 1, limit=200)
        assert abs(pcn - qc) < 1e-12
        assert abs(psn - qs) < 1e-12
    assert fourier_p(p, 1)[0] == pytest.approx(0.7)


def test_compact_polynomial_evaluation():
    q = CompactPotential(2.0, ((0.0, 1.0, (1.0, -2.0)), (1.0, 2.0, (0.0, 0.0, 3.0))))
    assert q(0.5) == pytest.approx(0.0)
    assert q(1.5) == pytest.approx(3.0 * 0.25)
    assert q(2.5) == 0.0
    assert q.q0 == pytest.approx((1.0 - 1.0) + 1.0)


def test_bump_vanishes_at_support_ends():
    q = CompactPotential.bump(-6.0, 1.0)
    assert abs(q(0.0)) < 1e-12 and abs(q(1.0 - 1e-12)) < 1e-6
    assert q(0.5) == pytest.approx(-6.0)


def test_dilate_preserves_shape_and_scales_support():
    q = CompactPotential.bump(2.0, 1.0)
    qt = q.dilate(5.0)
    assert qt.t == pytest.approx(5.0)
    xs = np.linspace(0.0, 1.0, 11)[1:-1]
    assert np.allclose(qt(5.0 * xs), q(xs), atol=1e-12)
    assert qt.q0 == pytest.approx(5.0 * q.q0)


def test_fourier_q_matches_quadrature():
    q = CompactPotential.bump(3.0, 1.5)
    for z in (0.3, 2.0, 1.0 + 0.7j):
        direct_re, _ = quad(lambda x: np.real(q(x) * np.exp(2j * z * x)), 0, 1.5,
                            limit=300)
        direct_im, _ = quad(lambda x: np.imag(q(x) * np.exp(2j * z * x)), 0, 1.5,
                            limit=300)
        assert abs(fourier_q(q, z) - (direct_re + 1j * direct_im)) < 1e-10


def test_fourier_q_is_entire():
    # Cauchy-Riemann residual of the transform at a random point
    q = CompactPotential.bump(-2.0, 1.0)
    z0, h = 1.7 - 0.6j, 1e-6
    dx = (fourier_q(q, z0 + h) - fourier_q(q, z0 - h)) / (2 * h)
    dy = (fourier_q(q, z0 + 1j * h) - fourier_q(q, z0 - 1j * h)) / (2j * h)
    assert abs(dx - dy) < 1e-8


def test_fourier_q_small_argument_continuity():
    q = CompactPotential.constant(-4.0, 1.0)
    assert abs(fourier_q(q, 0.0) - q.q0) < 1e-14
    assert abs(fourier_q(q, 1e-9) - fourier_q(q, 1e-3)) < 1e-2


def test_constants_square_well():
    p = PeriodicPotential(0.0, (), ())
    q = CompactPotential.constant(-4.0, 1.0)
    t, n_t, cf = constants(p, q)
    assert t == 1.0 and n_t == 1
    assert cf == pytest.approx(3.0 * 4.0 * np.exp(8.0), rel=1e-9)


def test_config_round_trip():
    cfg = {"p": {"mean": 0.5, "cos": [2.0], "sin": [0.3]},
           "q": {"t": 1.0, "pieces": [{"x0": 0.0, "x1": 1.0, "coeffs": [-4.0]}]}}
    p, q = potentials_from_config(json.loads(json.dumps(cfg)))
    assert p.cos == (2.0,) and p.sin == (0.3,)
    assert q(0.5) == -4.0


@pytest.mark.parametrize("broken", [
    {"q": {"t": 1.0}},
    {"p": {}, "q": {}},
    {"p": {}, "q": {"t": -1.0}},
    {"p": {}, "q": {"t": 1.0, "pieces": [{"x0": 0.5, "x1": 1.0, "coeffs": [1]}]}},
])
def test_config_errors(broken):
    with pytest.raises(ConfigError):
        potentials_from_config(broken)
