"""Fundamental solutions of the periodic problem, monodromy data, and the
band/gap/Dirichlet skeleton of the spectrum."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import integrate
from .errors import RootBracketFailure
from .potentials import PeriodicPotential
from .rootfind import bisect_vec, golden_max_vec

__all__ = [
    "Monodromy",
    "BandStructure",
    "monodromy",
    "monodromy_many",
    "band_edges",
    "dirichlet_mu",
    "solve_on_grid",
    "apply_gauge",
]

CLOSED_GAP_TOL = 1e-7


@dataclass(frozen=True)
class Monodromy:
    """Period-map data of -y'' + p(x + tau) y = z^2 y at one z."""

    theta1: complex
    phi1: complex
    theta1p: complex
    phi1p: complex
    z: complex
    tau: float = 0.0

    @property
    def delta(self) -> complex:
        return 0.5 * (self.phi1p + self.theta1)

    @property
    def beta(self) -> complex:
        return 0.5 * (self.phi1p - self.theta1)

    @property
    def wronskian(self) -> complex:
        return self.theta1 * self.phi1p - self.theta1p * self.phi1


def monodromy_many(p: PeriodicPotential, zs, tau: float = 0.0):
    """Arrays (theta1, theta1p, phi1, phi1p, delta, beta) over ``zs``."""
    Y = integrate.fundamental_at(p, zs, 1.0, tau=tau)
    th, thp, ph, php = Y[0], Y[1], Y[2], Y[3]
    return {
        "theta1": th,
        "theta1p": thp,
        "phi1": ph,
        "phi1p": php,
        "delta": 0.5 * (php + th),
        "beta": 0.5 * (php - th),
    }


def monodromy(p: PeriodicPotential, z, tau: float = 0.0) -> Monodromy:
    d = monodromy_many(p, [z], tau=tau)
    return Monodromy(
        theta1=complex(d["theta1"][0]),
        phi1=complex(d["phi1"][0]),
        theta1p=complex(d["theta1p"][0]),
        phi1p=complex(d["phi1p"][0]),
        z=complex(z),
        tau=tau,
    )


def delta_real(p: PeriodicPotential, zs):
    """Lyapunov function on the real z axis (real output)."""
    return np.real(monodromy_many(p, np.asarray(zs, dtype=float))["delta"])


def delta_neg_lambda(p: PeriodicPotential, lams):
    """Lyapunov function at real energies lam (z = sqrt(lam), sqrt(1)=1)."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    zs = np.where(lams >= 0, np.sqrt(np.abs(lams)) + 0j, 1j * np.sqrt(np.abs(lams)))
    return np.real(monodromy_many(p, zs)["delta"])


def lowest_periodic_eigenvalue(p: PeriodicPotential) -> float:
    """Lowest 1-periodic eigenvalue of the working potential."""
    lam_lo = float(np.min(p(np.linspace(0, 1, 512)))) - 1.0
    while delta_neg_lambda(p, [lam_lo])[0] <= 1.0:
        lam_lo -= 2.0
    lam_hi = lam_lo + 0.5
    while delta_neg_lambda(p, [lam_hi])[0] > 1.0:
        lam_hi += 0.5
        if lam_hi > lam_lo + 200.0:
            raise RootBracketFailure("no crossing of Delta = 1 found")
    f = lambda lam: delta_neg_lambda(p, lam) - 1.0
    root = bisect_vec(f, [lam_hi - 0.5], [lam_hi], iters=60)
    return float(root[0])


def apply_gauge(p: PeriodicPotential) -> PeriodicPotential:
    """Shift p so that the lowest periodic eigenvalue is exactly 0."""
    p0 = p.with_gauge(0.0)
    e0 = lowest_periodic_eigenvalue(p0)
    return p.with_gauge(p.gauge_shift + e0) if p.gauge_shift else p.with_gauge(e0)


@dataclass(frozen=True)
class BandStructure:
    """Momentum band edges, gaps and Dirichlet points of a gauged potential.

    ``enm``/``enp`` are e_n- and e_n+ for n = 1..N (increasing); ``mu``
    holds the Dirichlet momenta mu_n in [e_n-, e_n+]; ``closed`` flags
    degenerate gaps.  ``gauge_shift`` is carried along for reporting.
    """

    p: PeriodicPotential
    N: int
    enm: tuple
    enp: tuple
    mu: tuple
    closed: tuple

    @property
    def gauge_shift(self) -> float:
        return self.p.gauge_shift

    def gap(self, n: int):
        return self.enm[n - 1], self.enp[n - 1]

    def gap_width(self, n: int) -> float:
        return self.enp[n - 1] - self.enm[n - 1]

    def is_closed(self, n: int) -> bool:
        return bool(self.closed[n - 1])

    def energy_gap(self, n: int):
        return self.enm[n - 1] ** 2, self.enp[n - 1] ** 2

    @property
    def edge_array(self):
        """Flat increasing array [e_1-, e_1+, ..., e_N-, e_N+]."""
        out = np.empty(2 * self.N)
        out[0::2] = self.enm
        out[1::2] = self.enp
        return out

    def locate_real(self, x: float):
        """('band', n) for x inside band n, ('gap', n) inside closed gap
        ḡ_n, given x >= 0; bands are 1-indexed."""
        flat = self.edge_array
        idx = int(np.searchsorted(flat, x))
        if idx >= 2 * self.N:
            # beyond the computed skeleton; treat as band continuation
            return ("band", self.N + 1)
        return ("band", idx // 2 + 1) if idx % 2 == 0 else ("gap", (idx + 1) // 2)

    def in_gap(self, x: float):
        """Gap index n if x lies in some closed gap [e_n-, e_n+], else None."""
        kind, n = self.locate_real(x)
        if kind == "gap":
            return n
        # boundary points sit exactly on an edge
        for m in range(1, self.N + 1):
            if self.enm[m - 1] <= x <= self.enp[m - 1]:
                return m
        return None


def band_edges(p: PeriodicPotential, N: int) -> BandStructure:
    """Momentum band edges and Dirichlet points up to gap N.

    Expects a gauged potential (lowest periodic eigenvalue at 0); use
    :func:`apply_gauge` first.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    d0 = delta_real(p, np.array([0.0]))[0]
    if abs(d0 - 1.0) > 1e-6:
        raise ValueError(
            "potential is not gauged: Delta(0) = %.6g; call apply_gauge first" % d0
        )
    # anchors: the single zero of Delta inside each band
    zmax = np.pi * (N + 0.75)
    m = 48 * (N + 1)
    for attempt in range(3):
        grid = np.linspace(1e-4, zmax, m)
        dvals = delta_real(p, grid)
        sign = np.sign(dvals)
        idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        if idx.size >= N + 1:
            break
        m *= 3
    else:
        raise RootBracketFailure("could not find %d band anchors" % (N + 1))
    idx = idx[: N + 1]
    anchors = bisect_vec(lambda z: delta_real(p, z), grid[idx], grid[idx + 1], iters=48)

    phi_at = lambda z: np.real(monodromy_many(p, np.asarray(z, dtype=float))["phi1"])
    mu = bisect_vec(phi_at, anchors[:-1], anchors[1:], iters=52)

    # Delta^2 - 1 written as beta^2 + phi1 * theta1', which stays accurate
    # near narrow gaps where Delta - (-1)^n itself is lost to cancellation.
    # It is negative inside bands, positive inside open gaps, and vanishes
    # at the edges; the Dirichlet point mu_n lies inside the gap, so the
    # two edges bracket cleanly between band anchors and mu_n.
    def gsq(z):
        m = monodromy_many(p, np.asarray(z, dtype=float))
        return np.real(m["beta"]) ** 2 + np.real(m["phi1"]) * np.real(m["theta1p"])

    zstar, gmax = golden_max_vec(gsq, anchors[:-1], anchors[1:], iters=46)
    # gmax is the squared half-width of the gap in Delta units; the golden
    # search only locates zstar to sqrt(eps), but near a degenerate gap all
    # three monodromy factors vanish linearly there, so gmax itself is
    # quadratically small and the open/closed call stays sharp
    closed = gmax <= CLOSED_GAP_TOL ** 2
    both = bisect_vec(
        gsq,
        np.concatenate([anchors[:-1], zstar]),
        np.concatenate([zstar, anchors[1:]]),
        iters=52,
    )
    # a degenerate gap collapses to the (well-conditioned) Dirichlet root
    enm = np.where(closed, mu, both[:N])
    enp = np.where(closed, mu, both[N:])
    # keep the classical inclusion mu_n in [e_n-, e_n+] exactly
    mu = np.clip(mu, enm, enp)

    return BandStructure(
        p=p,
        N=N,
        enm=tuple(float(x) for x in enm),
        enp=tuple(float(x) for x in enp),
        mu=tuple(float(x) for x in mu),
        closed=tuple(bool(c) for c in closed),
    )


def dirichlet_mu(p: PeriodicPotential, N: int):
    """Dirichlet momenta mu_1..mu_N (roots of phi(1, .))."""
    return list(band_edges(p, N).mu)


def solve_on_grid(p: PeriodicPotential, z, xs, tau: float = 0.0):
    """Trajectories theta, theta', phi, phi' of the shifted problem on a
    grid xs in [0, 1] (xs increasing, xs[0] may be > 0)."""
    xs = np.asarray(xs, dtype=float)
    pot = (lambda s: p(s + tau)) if tau else p
    Y = integrate.propagate_pair(pot, [z], 0.0, float(xs[-1]),
                                 (1.0, 0.0, 0.0, 1.0), t_eval=xs)
    return {
        "theta": Y[0, 0], "thetap": Y[1, 0],
        "phi": Y[2, 0], "phip": Y[3, 0],
    }
