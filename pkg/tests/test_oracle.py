import numpy as np
import pytest

from hillres.oracle import (
    box_eigs_oracle,
    periodic_edges_oracle,
    squarewell_bound_energy,
    squarewell_jost,
)
from hillres.potentials import CompactPotential, PeriodicPotential


def test_periodic_edges_free_case():
    p0 = PeriodicPotential(0.0, (), ())
    edges = periodic_edges_oracle(p0, 4, N=800)
    exact = [0.0] + [(n * np.pi) ** 2 for n in (1, 1, 2, 2, 3, 3, 4, 4)]
    assert np.max(np.abs(np.asarray(edges) - exact)) < 1e-6


def test_squarewell_bound_count_grows_with_depth():
    assert len(squarewell_bound_energy(4.0, 1.0)) == 1
    assert len(squarewell_bound_energy(30.0, 1.0)) == 2
    assert len(squarewell_bound_energy(120.0, 1.0)) == 3


def test_squarewell_jost_free_limit():
    z = np.array([1.3 + 0.4j, -2.0 + 1.0j, 5.5 - 0.2j])
    vals = squarewell_jost(z, depth=0.0, t=1.0)
    assert np.max(np.abs(vals - 1.0)) < 1e-12


def test_squarewell_jost_continuous_at_kappa_zero():
    # kappa = sqrt(z^2 + depth) vanishes at z = 2i for depth 4
    z0 = 2.0j
    base = squarewell_jost(np.array([z0]), depth=4.0, t=1.0)[0]
    near = squarewell_jost(np.array([z0 + 1e-7, z0 - 1e-7j]), depth=4.0, t=1.0)
    assert np.max(np.abs(near - base)) < 1e-5


def test_squarewell_jost_vanishes_at_bound_state():
    lam = squarewell_bound_energy(4.0, 1.0)[0]
    z = 1j * np.sqrt(-lam)
    val = squarewell_jost(np.array([z]), depth=4.0, t=1.0)[0]
    assert abs(val) < 1e-10


def test_box_oracle_rejects_pure_box_modes():
    # free half line has no point spectrum: every box eigenvalue must be
    # recognized as an artifact by the cross-mesh comparison
    p0 = PeriodicPotential(0.0, (), ())
    q0 = CompactPotential.zero(1.0)
    found = box_eigs_oracle(p0, q0, (-4.0, -1e-6), L=40.0, N=16000)
    assert len(found) == 0


def test_box_oracle_matches_squarewell():
    p0 = PeriodicPotential(0.0, (), ())
    q = CompactPotential.constant(-4.0, 1.0)
    # the jump of q at x = 1 limits the central-difference accuracy, so the
    # mesh must be fine before the cross-mesh filter accepts the state
    found = box_eigs_oracle(p0, q, (-4.0, -1e-6), L=40.0, N=240000)
    exact = squarewell_bound_energy(4.0, 1.0)
    assert len(found) == 1
    assert found[0] == pytest.approx(exact[0], abs=2e-4)
