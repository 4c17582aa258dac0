import numpy as np
import pytest

from hillres.oracle import box_eigs_oracle, squarewell_bound_energy, squarewell_jost
from hillres.potentials import CompactPotential
from hillres.states import (
    find_gap_states,
    find_negative_states,
    find_resonances,
    norming_constant,
    structural_checks,
    unperturbed_state,
)

# second-sheet zeros of the square-well scattering function with |z| <= 12,
# frozen from a scan of the closed form cos k - (iz/k) sin k, k^2 = z^2 + 4
SQUAREWELL_RESONANCES = [
    3.9277792399514655 - 1.6475234703034773j,
    7.332990525389741 - 2.116159412327317j,
    10.595286155363095 - 2.4339043840871653j,
]


def test_squarewell_bound_state(bands_zero, q_well):
    states = find_negative_states(bands_zero, q_well, y_max=6.0)
    bound = [s for s in states if s.kind == "bound"]
    assert len(bound) == 1
    exact = squarewell_bound_energy(4.0, 1.0)
    assert len(exact) == 1
    assert np.imag(bound[0].z) > 0
    assert abs(np.real(bound[0].lam) - exact[0]) < 1e-7


def test_squarewell_no_antibound(bands_zero, q_well):
    # kappa cot(kappa) = +y has no root for this depth
    states = find_negative_states(bands_zero, q_well, y_max=6.0)
    assert not [s for s in states if s.kind == "antibound"]


def test_squarewell_resonances(bands_zero, q_well):
    found = find_resonances(bands_zero, q_well, x_max=12.0, y_min=-4.0)
    zs = sorted((s.z for s in found if np.real(s.z) > 0), key=np.real)
    assert len(zs) == len(SQUAREWELL_RESONANCES)
    for got, want in zip(zs, SQUAREWELL_RESONANCES):
        assert abs(got - want) < 1e-6
        assert abs(squarewell_jost(got)) < 1e-8
    # conjugate-mirror pair on the negative-real side
    neg = sorted((s.z for s in found if np.real(s.z) < 0), key=np.real)
    assert len(neg) == len(zs)


def test_unperturbed_gap_state_kinds(bands_generic):
    # every open gap of the background carries exactly one state at the
    # Dirichlet point; with q = 0 the census must reproduce it
    q0 = CompactPotential.zero(1.0)
    for n in (1, 2, 3):
        if bands_generic.is_closed(n):
            continue
        un = unperturbed_state(bands_generic, n)
        rep = find_gap_states(bands_generic, q0, n)
        assert rep.persistent_mu
        assert len(rep.states) == 1
        st = rep.states[0]
        assert st.kind == un.kind
        assert abs(np.real(st.z) - bands_generic.mu[n - 1]) < 1e-8


def test_gap_bound_states_match_box_oracle(bands_mathieu, p_mathieu):
    # deep attractive bump: one eigenvalue below the spectrum, none in gaps 1..3
    qm = CompactPotential.bump(-12.0, 0.8)
    neg = [s for s in find_negative_states(bands_mathieu, qm, y_max=6.0)
           if s.kind == "bound"]
    assert len(neg) == 1
    oracle = box_eigs_oracle(p_mathieu, qm, (-8.0, -1e-6), L=60.0, N=48000)
    assert len(oracle) == 1
    assert abs(float(np.real(neg[0].lam)) - oracle[0]) < 1e-4
    for n in (1, 2, 3):
        rep = find_gap_states(bands_mathieu, qm, n)
        assert not [s for s in rep.states if s.kind == "bound"]
        enm, enp = bands_mathieu.gap(n)
        window = (enm * enm + 1e-6, enp * enp - 1e-6)
        assert len(box_eigs_oracle(p_mathieu, qm, window, L=60.0, N=48000)) == 0
    # deep repulsive bump: one eigenvalue inside the first spectral gap
    qp = CompactPotential.bump(12.0, 0.8)
    rep = find_gap_states(bands_mathieu, qp, 1)
    bound = sorted(float(np.real(s.lam)) for s in rep.states
                   if s.kind == "bound")
    assert len(bound) == 1
    enm, enp = bands_mathieu.gap(1)
    window = (enm * enm + 1e-6, enp * enp - 1e-6)
    oracle = box_eigs_oracle(p_mathieu, qp, window, L=60.0, N=48000)
    assert len(oracle) == 1
    assert abs(bound[0] - oracle[0]) < 1e-4


def test_interlacing_structure(bands_generic, q_bump):
    out = structural_checks(bands_generic, q_bump, 4)
    assert out["violations"] == []
    for rep in out["reports"]:
        assert len(rep.states) % 2 == 1


def test_norming_constant_routes_agree(bands_zero, q_well):
    states = find_negative_states(bands_zero, q_well, y_max=6.0)
    st = [s for s in states if s.kind == "bound"][0]
    a = norming_constant(bands_zero, q_well, st, route="derivative")
    b = norming_constant(bands_zero, q_well, st, route="integral")
    assert a == pytest.approx(b, rel=2e-3)
    # frozen from the explicit square-well eigenfunction integral
    assert a == pytest.approx(0.3988968957, rel=1e-3)


def test_resonances_stay_off_axes(bands_mathieu, q_bump):
    found = find_resonances(bands_mathieu, q_bump, x_max=8.0, y_min=-3.0)
    for s in found:
        assert np.imag(s.z) < -1e-9
        assert abs(np.real(s.z)) > 1e-8
