"""Vectorized propagation of  -y'' + v(x) y = z^2 y  over arrays of z.

A single adaptive solve advances two solution pairs (value and derivative)
for every z simultaneously; the step controller is shared, so batched calls
are far cheaper than per-point integration.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepFailure

RTOL = 1e-11
ATOL = 1e-13


def propagate_pair(v, zs, x0, x1, init, t_eval=None, rtol=RTOL, atol=ATOL):
    """Integrate two solutions of -y'' + v(x) y = z^2 y from x0 to x1.

    ``init`` is (u0, u0p, w0, w0p), each broadcastable to ``zs``.  Returns
    an array of shape (4, n) with rows (u, u', w, w') at x1, or shape
    (4, n, len(t_eval)) when ``t_eval`` is given.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    n = zs.size
    z2 = zs * zs
    y0 = np.empty((4, n), dtype=complex)
    for i, comp in enumerate(init):
        y0[i] = np.broadcast_to(np.asarray(comp, dtype=complex), (n,))

    def rhs(x, y):
        Y = y.reshape(4, n)
        c = v(x) - z2
        out = np.empty_like(Y)
        out[0] = Y[1]
        out[1] = c * Y[0]
        out[2] = Y[3]
        out[3] = c * Y[2]
        return out.ravel()

    sol = solve_ivp(
        rhs,
        (x0, x1),
        y0.ravel(),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        raise StepFailure(f"integrator failed on [{x0}, {x1}]: {sol.message}")
    if t_eval is None:
        return sol.y[:, -1].reshape(4, n)
    return sol.y.reshape(4, n, -1)


def fundamental_at(v, zs, x, tau=0.0, rtol=RTOL, atol=ATOL):
    """Values (theta, theta', phi, phi') at ``x`` for the shifted potential
    v(. + tau), with the canonical initial data at 0."""
    if x == 0.0:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        out = np.zeros((4, zs.size), dtype=complex)
        out[0] = 1.0
        out[3] = 1.0
        return out
    pot = (lambda s: v(s + tau)) if tau else v
    return propagate_pair(pot, zs, 0.0, x, (1.0, 0.0, 0.0, 1.0), rtol=rtol, atol=atol)
