"""Vectorized bracketing root/extremum refinement.

All callables take a numpy array of abscissae and return an array of
values; one call per iteration refines every bracket at once.
"""
from __future__ import annotations

import numpy as np


def bisect_vec(f, lo, hi, iters=52):
    """Bisection on an array of sign-change brackets [lo, hi]."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.asarray(f(lo), dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = np.asarray(f(mid), dtype=float)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def newton_polish_vec(f, x, lo, hi, steps=3, h=1e-7):
    """Central-difference Newton steps, clipped to the brackets."""
    x = np.array(x, dtype=float)
    for _ in range(steps):
        fp = np.asarray(f(x + h), dtype=float)
        fm = np.asarray(f(x - h), dtype=float)
        f0 = np.asarray(f(x), dtype=float)
        deriv = (fp - fm) / (2.0 * h)
        deriv = np.where(np.abs(deriv) < 1e-300, 1e-300, deriv)
        with np.errstate(over="ignore", invalid="ignore"):
            step = np.where(np.isfinite(f0 / deriv), f0 / deriv, 0.0)
        x = np.clip(x - step, lo, hi)
    return x


def golden_max_vec(f, lo, hi, iters=70):
    """Golden-section maximization on an array of brackets; returns
    (argmax, max)."""
    g = (np.sqrt(5.0) - 1.0) / 2.0
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    n = lo.size
    for _ in range(iters):
        x1 = hi - g * (hi - lo)
        x2 = lo + g * (hi - lo)
        vals = np.asarray(f(np.concatenate([x1, x2])), dtype=float)
        f1, f2 = vals[:n], vals[n:]
        pick1 = f1 >= f2
        hi = np.where(pick1, x2, hi)
        lo = np.where(pick1, lo, x1)
    xm = 0.5 * (lo + hi)
    return xm, np.asarray(f(xm), dtype=float)
