"""Quasimomentum, Weyl functions, and the two-sheeted momentum surface.

The momentum plane is cut along the closures of the momentum gaps
g_n = (e_n^-, e_n^+) on the positive real axis together with the
imaginary axis g_0.  Each cut has two rims; points on a rim are tagged
with the sheet they belong to.  The quasimomentum k(z) = arccos(Delta(z))
is fixed by the conditions k(z) ~ z at infinity, Re k = pi n on the rims
of gap n, and sign(Im k) = sign(Im z) off the cuts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguity, PoleAtMu
from .hill import BandStructure, Monodromy, monodromy_many

EDGE_SNAP = 1e-10
PHI_POLE_TOL = 1e-9


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the cut momentum plane.

    z is the momentum value.  rim is +1 for the physical rim (the one
    reached as a limit from the physical sheet), -1 for the nonphysical
    rim, and 0 for points off the cuts.  Points on the open upper
    imaginary half axis with rim 0 are treated as physical-sheet limits,
    on the lower half axis as nonphysical ones, matching the
    identification of g_0^+ with bound states and g_0^- with antibound
    ones.
    """

    z: complex
    rim: int = 0

    def __post_init__(self) -> None:
        if self.rim not in (-1, 0, +1):
            raise ValueError("rim must be -1, 0, or +1")


def surface_point(bands: BandStructure, z: complex, rim: int | None = None) -> SurfacePoint:
    """Tag a momentum value with its rim, validating against the cuts.

    For z strictly inside a real momentum gap a rim is required; passing
    rim=None there raises BranchAmbiguity.  For z on the imaginary axis
    the rim is inferred from the sign of Im z when not given.  Off the
    cuts any explicit rim is rejected.
    """
    z = complex(z)
    if abs(z.imag) < EDGE_SNAP and z.real >= 0.0:
        where, n = bands.locate_real(z.real)
        if where == "gap" and not bands.is_closed(n):
            if rim is None:
                raise BranchAmbiguity(
                    f"z={z} lies in momentum gap {n}; a rim tag is required"
                )
            return SurfacePoint(complex(z.real, 0.0), int(rim))
        # on a band (or a degenerate gap) both rims agree
        return SurfacePoint(complex(z.real, 0.0), 0)
    if abs(z.real) < EDGE_SNAP:
        zz = complex(0.0, z.imag)
        if rim is None:
            rim = +1 if z.imag > 0 else (-1 if z.imag < 0 else 0)
        return SurfacePoint(zz, int(rim))
    if rim not in (None, 0):
        raise BranchAmbiguity(f"z={z} is off the cuts; rim tag {rim} is meaningless")
    return SurfacePoint(z, 0)


@dataclass(frozen=True)
class Quasimomentum:
    k: complex
    delta: complex
    point: SurfacePoint


def _acosh_clipped(x: np.ndarray | float) -> np.ndarray | float:
    # (-1)^n Delta can dip a hair below 1 at an edge through roundoff
    return np.arccosh(np.maximum(np.asarray(x, dtype=float), 1.0))


def quasimomentum(bands: BandStructure, pt: SurfacePoint) -> Quasimomentum:
    """Evaluate k(z) on the cut plane with the normalization k ~ z."""
    z = pt.z
    if z.real < 0.0:
        flipped = quasimomentum(bands, SurfacePoint(-z, pt.rim))
        return Quasimomentum(-flipped.k, flipped.delta, pt)

    m = monodromy_many(bands.p, np.array([z]))
    delta = complex(m["delta"][0])

    if abs(z.real) < EDGE_SNAP:
        # imaginary axis: Delta is real and >= 1 below the spectrum,
        # k = i sign(Im z) arccosh(Delta), pure imaginary
        s = 1.0 if z.imag >= 0 else -1.0
        k = 1j * s * float(_acosh_clipped(delta.real))
        return Quasimomentum(k, delta, pt)

    if abs(z.imag) < EDGE_SNAP:
        where, n = bands.locate_real(z.real)
        if where == "gap" and not bands.is_closed(n):
            # rim of gap n: k = pi n + i h with (-1)^n cosh h = Delta
            h = float(_acosh_clipped((-1) ** n * delta.real))
            k = np.pi * n + 1j * pt.rim * h
            return Quasimomentum(k, delta, pt)
        # on band n (1-based): Delta in [-1, 1], k real, increasing
        # from pi(n-1) to pi n across the band
        w = float(np.arccos(np.clip(delta.real, -1.0, 1.0)))
        if n % 2 == 1:
            k = complex(np.pi * (n - 1) + w)
        else:
            k = complex(np.pi * n - w)
        return Quasimomentum(k, delta, pt)

    # generic complex z: principal arccos plus the right reflection and
    # 2 pi shift.  Candidates +-w + 2 pi j are filtered by the sign rule
    # Im k Im z > 0 and anchored near the band value of Re z.
    w = np.arccos(delta)
    target = _real_axis_re_k(bands, z.real)
    best = None
    for sgn in (+1.0, -1.0):
        base = sgn * w
        j0 = round((target - base.real) / (2.0 * np.pi))
        for j in (j0 - 1, j0, j0 + 1):
            cand = base + 2.0 * np.pi * j
            if cand.imag * z.imag <= 0.0:
                continue
            score = abs(cand.real - target)
            if best is None or score < best[0]:
                best = (score, cand)
    if best is None:
        raise BranchAmbiguity(f"no admissible quasimomentum branch at z={z}")
    return Quasimomentum(complex(best[1]), delta, pt)


def _real_axis_re_k(bands: BandStructure, x: float) -> float:
    """Re k at the real point below/above z, used to anchor the branch."""
    if x <= 0.0:
        return 0.0
    where, n = bands.locate_real(x)
    if where == "gap":
        return np.pi * n
    m = monodromy_many(bands.p, np.array([x]))
    w = float(np.arccos(np.clip(m["delta"][0].real, -1.0, 1.0)))
    if n % 2 == 1:
        return np.pi * (n - 1) + w
    return np.pi * n - w


def quasimomentum_curve(bands: BandStructure, zs: np.ndarray) -> np.ndarray:
    """k(z) along an array of momenta, each resolved pointwise."""
    out = np.empty(len(zs), dtype=complex)
    for i, z in enumerate(np.asarray(zs, dtype=complex)):
        out[i] = quasimomentum(bands, surface_point(bands, z)).k
    return out


@dataclass(frozen=True)
class WeylPair:
    m_plus: complex
    m_minus: complex
    k: complex
    mono: Monodromy


def weyl_m(bands: BandStructure, pt: SurfacePoint) -> WeylPair:
    """Weyl functions m_± = (beta ± i sin k) / phi1 on the surface.

    On the physical rim m_+ picks the decaying Floquet branch.  Raises
    PoleAtMu when the evaluation point sits on a zero of phi1.
    """
    qm = quasimomentum(bands, pt)
    m = monodromy_many(bands.p, np.array([pt.z]))
    phi1 = complex(m["phi1"][0])
    beta = complex(m["beta"][0])
    if abs(phi1) < PHI_POLE_TOL * max(1.0, abs(beta)):
        raise PoleAtMu(f"phi1 vanishes at z={pt.z}; Weyl functions have a pole")
    s = 1j * np.sin(qm.k)
    return WeylPair((beta + s) / phi1, (beta - s) / phi1, qm.k, Monodromy(
        theta1=complex(m["theta1"][0]),
        phi1=phi1,
        theta1p=complex(m["theta1p"][0]),
        phi1p=complex(m["phi1p"][0]),
        z=pt.z,
        tau=1.0,
    ))


def floquet(bands: BandStructure, pt: SurfacePoint, xs: np.ndarray) -> dict:
    """Floquet solutions psi_± = theta + m_± phi on a grid in [0, x_max].

    Values beyond the first period are produced from the first-period
    profile by the multiplier e^{±ik m} on period m.
    """
    from .integrate import fundamental_at  # local to avoid cycle at import

    wp = weyl_m(bands, pt)
    xs = np.asarray(xs, dtype=float)
    frac, per = np.modf(xs)
    out_p = np.empty(len(xs), dtype=complex)
    out_m = np.empty(len(xs), dtype=complex)
    uniq = np.unique(np.round(frac, 14))
    for u in uniq:
        sel = np.abs(frac - u) < 1e-13
        tr = fundamental_at(bands.p, np.array([pt.z]), float(u))
        th, ph = complex(tr[0, 0]), complex(tr[2, 0])
        base_p = th + wp.m_plus * ph
        base_m = th + wp.m_minus * ph
        out_p[sel] = base_p * np.exp(1j * wp.k * per[sel])
        out_m[sel] = base_m * np.exp(-1j * wp.k * per[sel])
    return {"psi_plus": out_p, "psi_minus": out_m, "k": wp.k}


def ids(bands: BandStructure, lam: float) -> float:
    """Integrated density of states (1/pi) Re k at energy lam (gauged)."""
    if lam <= 0.0:
        return 0.0
    z = float(np.sqrt(lam))
    where, n = bands.locate_real(z)
    if where == "gap":
        return float(n)
    return _real_axis_re_k(bands, z) / np.pi
