"""Independent cross-checks built on finite differences and closed forms.

Everything here deliberately avoids the ODE-based machinery of the rest of
the package: band edges come from dense symmetric eigensolves of the
periodic/antiperiodic problems with Richardson extrapolation, bound states
from a large Dirichlet box, and the square-well scattering data from its
elementary closed form.  Agreement between these and the main pipeline is
the primary correctness evidence.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .potentials import CompactPotential, PeriodicPotential

__all__ = [
    "periodic_edges_oracle",
    "box_eigs_oracle",
    "squarewell_jost",
    "squarewell_bound_energy",
]


def _periodic_eigs(v, L, N, k):
    """Lowest k eigenvalues of -y'' + v y on [0, L] with periodic closure.

    Central differences on a midpoint mesh; antiperiodic edges are obtained
    by the caller through the doubled cell L = 2, where both the periodic
    and the antiperiodic spectrum of the unit cell appear as plain periodic
    eigenvalues.
    """
    h = L / N
    x = (np.arange(N) + 0.5) * h
    diag = 2.0 / h ** 2 + v(x)
    off = np.full(N - 1, -1.0 / h ** 2)
    # periodic closure via dense matrix: N is a few thousand at most
    A = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    A[0, -1] = A[-1, 0] = -1.0 / h ** 2
    w = np.linalg.eigvalsh(A)
    return w[:k]


def periodic_edges_oracle(p: PeriodicPotential, n_max: int, N: int = 1500):
    """Band edges from periodic eigenvalues on the doubled cell [0, 2].

    All 2n_max + 1 edges are eigenvalues of the period-2 problem.  Two-level
    Richardson extrapolation (h, h/2, h/4) removes the O(h^2) and O(h^4)
    discretization errors of the central-difference Laplacian.  Returns the
    sorted edge array [e0, e1-, e1+, e2-, e2+, ...] of length 2 n_max + 1.
    """
    k = 2 * n_max + 1
    levels = [np.sort(_periodic_eigs(p, 2.0, N * s, k + 4))[:k] for s in (1, 2, 4)]
    e0, e1, e2 = levels
    # eliminate h^2 then h^4
    r1 = (4.0 * e1 - e0) / 3.0
    r2 = (4.0 * e2 - e1) / 3.0
    return (16.0 * r2 - r1) / 15.0


def box_eigs_oracle(p, q, window, L: float = 60.0, N: int = 60000):
    """Dirichlet-box eigenvalues of -y'' + (p + q) y in an energy window.

    Solves on [0, L] with a fine uniform mesh and confirms against a second
    mesh (1.5x points, L + 15): eigenvalues that move by more than ``tol``
    between the meshes are discretization artifacts / box states and are
    dropped.  Returns the surviving eigenvalues from the finer run.
    """
    lo, hi = window

    def run(Lb, Nb):
        h = Lb / (Nb + 1)
        x = np.arange(1, Nb + 1) * h
        diag = 2.0 / h ** 2 + p(x) + q(x)
        off = np.full(Nb - 1, -1.0 / h ** 2)
        w = eigh_tridiagonal(
            diag, off, eigvals_only=True, select="v", select_range=(lo, hi)
        )
        # one Richardson step against a half-resolution run on the same box
        h2 = Lb / (Nb // 2 + 1)
        x2 = np.arange(1, Nb // 2 + 1) * h2
        d2 = 2.0 / h2 ** 2 + p(x2) + q(x2)
        o2 = np.full(Nb // 2 - 1, -1.0 / h2 ** 2)
        w2 = eigh_tridiagonal(
            d2, o2, eigvals_only=True, select="v",
            select_range=(lo - 1e-3, hi + 1e-3),
        )
        out = []
        for val in w:
            j = np.argmin(np.abs(w2 - val)) if len(w2) else None
            if j is not None and abs(w2[j] - val) < 0.3 * (abs(val) + 1.0):
                out.append((4.0 * val - w2[j]) / 3.0)
            else:
                out.append(val)
        return np.array(out)

    wa = run(L, N)
    wb = run(L + 15.0, int(1.5 * N))
    keep = []
    for val in wa:
        if len(wb) and np.min(np.abs(wb - val)) < 1e-4 * (1.0 + abs(val)):
            j = np.argmin(np.abs(wb - val))
            keep.append(wb[j])
    return np.array(sorted(keep))


def squarewell_jost(z, depth: float = 4.0, t: float = 1.0):
    """Jost function at the origin for p = 0, q = -depth on [0, t].

    With kappa^2 = z^2 + depth the solution matching e^{izx} at x = t gives
        Psi_0^+(z) = e^{izt} (cos(kappa t) - (iz/kappa) sin(kappa t)).
    The expression is even in kappa, hence entire in z; the sin/kappa factor
    is evaluated by series near kappa = 0.
    """
    z = np.asarray(z, dtype=complex)
    kap2 = z * z + depth
    kap = np.sqrt(kap2)
    kt = kap * t
    small = np.abs(kt) < 1e-4
    kt_safe = np.where(small, 1.0, kt)
    s_over = np.where(
        small,
        t * (1.0 - kt * kt / 6.0 + kt ** 4 / 120.0),
        np.sin(kt_safe) / np.where(small, 1.0, kap),
    )
    val = np.exp(1j * z * t) * (np.cos(kt) - 1j * z * s_over)
    return val if val.shape else complex(val)


def squarewell_bound_energy(depth: float = 4.0, t: float = 1.0):
    """Bound-state energies for the half-line square well of given depth.

    Zeros of Psi_0^+ at z = i y, y > 0: kappa cot(kappa t) = -y with
    kappa = sqrt(depth - y^2).  Returns the list of energies -y^2.
    """
    from scipy.optimize import brentq

    def f(y):
        kap = np.sqrt(depth - y * y)
        return kap * np.cos(kap * t) + y * np.sin(kap * t)

    ymax = np.sqrt(depth)
    ys = np.linspace(1e-9, ymax - 1e-9, 4000)
    vals = f(ys)
    roots = []
    for a, b, va, vb in zip(ys[:-1], ys[1:], vals[:-1], vals[1:]):
        if va == 0.0:
            roots.append(a)
        elif va * vb < 0:
            roots.append(brentq(f, a, b, xtol=1e-14))
    return [-(y * y) for y in roots]
