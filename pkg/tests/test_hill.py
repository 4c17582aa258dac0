import numpy as np
import pytest

from hillres.hill import (
    apply_gauge,
    band_edges,
    monodromy,
    monodromy_many,
)
from hillres.oracle import periodic_edges_oracle
from hillres.potentials import PeriodicPotential


def test_monodromy_free_case():
    p = apply_gauge(PeriodicPotential(0.0, (), ()))
    for z in (0.7, 2.3, 1.0 + 0.5j):
        m = monodromy(p, z)
        assert abs(m.theta1 - np.cos(z)) < 1e-10
        assert abs(m.phi1 - np.sin(z) / z) < 1e-10
        assert abs(m.delta - np.cos(z)) < 1e-10


def test_wronskian_identity_random_z():
    p = apply_gauge(PeriodicPotential(0.0, (1.8, -0.9), (1.1,)))
    rng = np.random.default_rng(7)
    zs = rng.uniform(-20, 20, 50) + 1j * rng.uniform(-5, 5, 50)
    m = monodromy_many(p, zs)
    w = m["theta1"] * m["phi1p"] - m["theta1p"] * m["phi1"]
    assert np.max(np.abs(w - 1.0)) < 1e-9


def test_gauge_puts_ground_state_at_zero():
    p = apply_gauge(PeriodicPotential(0.3, (2.0,), (0.7,)))
    d0 = np.real(monodromy_many(p, np.array([0.0]))["delta"][0])
    assert abs(d0 - 1.0) < 1e-9


def test_free_edges_and_mu_exact():
    p = apply_gauge(PeriodicPotential(0.0, (), ()))
    b = band_edges(p, 8)
    for n in range(1, 9):
        enm, enp = b.gap(n)
        assert b.is_closed(n)
        assert abs(enm - np.pi * n) < 1e-9
        assert abs(enp - np.pi * n) < 1e-9
        assert abs(b.mu[n - 1] - np.pi * n) < 1e-9


def test_mathieu_edges_match_independent_oracle(p_mathieu, bands_mathieu):
    lam = np.concatenate([[0.0], np.asarray(bands_mathieu.edge_array) ** 2])
    orc = periodic_edges_oracle(p_mathieu, 8, N=1000)
    assert np.max(np.abs(lam - orc)) < 1e-5


def test_mathieu_open_and_narrow_gaps(bands_mathieu):
    # the first gaps are open with rapidly decreasing widths; the third is
    # narrow (a few 1e-4 in energy) but must not be flagged closed
    w = [bands_mathieu.gap_width(n) for n in range(1, 4)]
    assert not bands_mathieu.is_closed(1)
    assert not bands_mathieu.is_closed(2)
    assert not bands_mathieu.is_closed(3)
    assert w[0] > w[1] > w[2] > 0.0
    enm, enp = bands_mathieu.gap(3)
    assert 1e-5 < enp ** 2 - enm ** 2 < 1e-3


def test_dirichlet_point_inside_gap(bands_generic):
    for n in range(1, 9):
        enm, enp = bands_generic.gap(n)
        assert enm <= bands_generic.mu[n - 1] <= enp


def test_locate_real(bands_mathieu):
    enm, enp = bands_mathieu.gap(1)
    kind, n = bands_mathieu.locate_real(0.5 * (enm + enp))
    assert (kind, n) == ("gap", 1)
    kind, n = bands_mathieu.locate_real(0.5 * enm)
    assert (kind, n) == ("band", 1)


def test_generic_edges_match_oracle(p_generic, bands_generic):
    lam = np.concatenate([[0.0], np.asarray(bands_generic.edge_array) ** 2])
    orc = periodic_edges_oracle(p_generic, 8, N=1000)
    assert np.max(np.abs(lam - orc)) < 1e-5
