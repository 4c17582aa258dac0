"""Location and classification of bound, antibound, virtual states and
resonances of the perturbed half-line operator.

Real states live on the closures of the momentum gaps: a zero of the
physical-rim factor G_up is a bound state, a zero of the nonphysical-rim
factor G_dn is an antibound state, and a zero of the entire locator F at
a gap edge is a virtual state.  States below the spectrum sit on the
imaginary momentum axis.  Resonances are the remaining zeros of the
continued Jost function, strictly inside the lower momentum half plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import ClassificationAmbiguous, ContourThroughZero, NotABoundState
from .hill import BandStructure, monodromy_many
from .integrate import propagate_pair
from .jost import (
    boundary_data,
    gap_factors,
    jost0,
    jost0_many,
    locator_many,
    neg_axis_factors,
    persistence_values,
)
from .momentum import surface_point
from .potentials import CompactPotential, constants
from .rootfind import bisect_vec, newton_polish_vec

EDGE_PAD = 1e-9
VIRTUAL_TOL = 1e-7
PERSIST_TOL = 1e-8
CLS_RATIO = 1e-4


@dataclass(frozen=True)
class State:
    """A single spectral state in momentum coordinates.

    z is the momentum; the energy is z^2 plus the gauge shift of the
    periodic background.  kind is one of 'bound', 'antibound',
    'virtual', 'resonance'.  gap is the gap index for real states (0 for
    the half axis below the spectrum), None for resonances.
    """

    kind: str
    z: complex
    gap: int | None
    energy: float | complex
    residual: float = 0.0

    @property
    def lam(self) -> complex:
        return self.z * self.z


@dataclass(frozen=True)
class GapReport:
    n: int
    states: tuple
    persistent_mu: bool
    unperturbed: "State | None"


def _mk_state(bands: BandStructure, kind: str, z: complex, gap: int | None,
              residual: float = 0.0) -> State:
    energy = z * z + bands.gauge_shift
    if abs(np.imag(energy)) < 1e-30:
        energy = float(np.real(energy))
    return State(kind, z, gap, energy, residual)


def unperturbed_state(bands: BandStructure, n: int) -> State | None:
    """Classify the single state of the background operator in gap n.

    At the Dirichlet point mu_n the Floquet multiplier is e^{h} with
    sinh h = -(-1)^n beta(mu_n); positive h means the Dirichlet solution
    decays, a bound state, negative h an antibound state, h = 0 (mu_n at
    a gap edge) a virtual state.  Returns None for a closed gap.
    """
    if bands.is_closed(n):
        return None
    mu = bands.mu[n - 1]
    enm, enp = bands.gap(n)
    m = monodromy_many(bands.p, np.array([mu]))
    beta = float(np.real(m["beta"][0]))
    h = np.arcsinh(-((-1.0) ** n) * beta)
    width = enp - enm
    if min(mu - enm, enp - mu) < 1e-9 * max(width, 1.0) or abs(h) < 1e-10:
        return _mk_state(bands, "virtual", complex(mu), n)
    kind = "bound" if h > 0 else "antibound"
    return _mk_state(bands, kind, complex(mu), n)


def _real_roots(f, lo: float, hi: float, samples: int,
                cluster: float | None = None) -> np.ndarray:
    xs = np.linspace(lo, hi, samples)
    if cluster is not None and lo < cluster < hi:
        # geometric refinement around a point where the factor has an
        # automatic zero: a genuine root nearby produces a sign excursion
        # much narrower than the uniform spacing
        span = min(cluster - lo, hi - cluster)
        offs = span * np.geomspace(1e-9, 1.0, 40)
        xs = np.unique(np.concatenate([xs, cluster - offs, cluster + offs,
                                       [cluster]]))
    vals = np.asarray(f(xs), dtype=float)
    sgn = np.sign(vals)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if len(flips) == 0:
        return np.empty(0)
    roots = bisect_vec(f, xs[flips], xs[flips + 1], iters=60)
    return newton_polish_vec(f, roots, xs[flips], xs[flips + 1], steps=2,
                             h=1e-7 * max(1.0, hi))


def find_gap_states(bands: BandStructure, q: CompactPotential, n: int,
                    samples: int = 400, edge_pad: float | None = None) -> GapReport:
    """All real states of the perturbed operator attached to gap n >= 1.

    Zeros of the two rim factors are found separately, so classification
    is structural rather than a tolerance comparison.  A common zero of
    both factors can only sit at mu_n with phi~(0, mu_n) = 0: the
    unperturbed state persists there with its original type.
    """
    if bands.is_closed(n):
        return GapReport(n, (), False, None)
    enm, enp = bands.gap(n)
    mu = bands.mu[n - 1]
    width = enp - enm
    pad = edge_pad if edge_pad is not None else EDGE_PAD * max(width, 1.0)
    lo, hi = enm + pad, enp - pad
    un = unperturbed_state(bands, n)
    if hi <= lo:
        return GapReport(n, (), False, un)

    gf = lambda zz, key: gap_factors(bands, q, n, zz)[key]
    r_up = _real_roots(lambda zz: gf(zz, "G_up"), lo, hi, samples, cluster=mu)
    r_dn = _real_roots(lambda zz: gf(zz, "G_dn"), lo, hi, samples, cluster=mu)

    # each factor vanishes automatically at mu_n (phi1 = 0 there) on the
    # rim opposite the background state; that zero cancels against the
    # phi1 pole in F and is a state only if phi~(0, mu_n) = 0 as well
    persists = bool(np.abs(persistence_values(bands, q, np.array([mu]))[0])
                    < PERSIST_TOL * (1.0 + abs(mu)))
    tol_mu = 1e-8 * (1.0 + abs(mu))
    states = []
    used_mu = False
    for kind, roots in (("bound", r_up), ("antibound", r_dn)):
        key = "G_up" if kind == "bound" else "G_dn"
        for r in roots:
            if abs(r - mu) < tol_mu:
                if not persists or used_mu:
                    continue
                used_mu = True
                states.append(_mk_state(bands, un.kind if un else kind, complex(mu), n))
            else:
                states.append(_mk_state(bands, kind, complex(r), n,
                                        residual=abs(gf(np.array([r]), key)[0])))

    # parity fallback: in a very narrow gap the rim factors are uniform
    # cancellation noise and can miss the sign change entirely, while the
    # entire locator still resolves the zero; rescan F when the census
    # parity says a state was lost and classify by the smaller rim value
    if len(states) % 2 == 0:
        rF = _real_roots(
            lambda zz: np.real(locator_many(bands, q, zz.astype(complex))),
            lo, hi, samples, cluster=mu)
        for r in rF:
            if abs(r - mu) < tol_mu:
                continue
            if any(abs(r - np.real(s.z)) < 1e-7 * (1.0 + abs(r)) for s in states):
                continue
            gu = abs(gf(np.array([r]), "G_up")[0])
            gd = abs(gf(np.array([r]), "G_dn")[0])
            kind = "bound" if gu < gd else "antibound"
            states.append(_mk_state(bands, kind, complex(r), n,
                                    residual=min(gu, gd)))

    # virtual states at the edges: zeros of the entire locator there
    Fv = np.real(locator_many(bands, q, np.array([enm, enp], dtype=complex)))
    # scale from both the gap interior and nearby band points: inside a
    # very narrow gap the locator is uniformly small and the interior
    # alone would flag both edges as virtual
    probes = np.concatenate([
        np.linspace(lo, hi, 16),
        [max(enm - 0.05, 1e-3), enp + 0.05],
    ]).astype(complex)
    scale = np.max(np.abs(np.real(locator_many(bands, q, probes)))) + 1e-300
    for e, fv in zip((enm, enp), Fv):
        # an interior zero close to the edge drags |F(edge)| down too; the
        # locator has simple zeros, so count that zero once, as interior
        if any(abs(np.real(s.z) - e) < 0.3 * width for s in states):
            continue
        if abs(fv) < VIRTUAL_TOL * max(scale, 1.0):
            states.append(_mk_state(bands, "virtual", complex(e), n, residual=abs(fv)))

    states.sort(key=lambda s: np.real(s.z))
    return GapReport(n, tuple(states), persists, un)


def find_negative_states(bands: BandStructure, q: CompactPotential,
                         y_max: float = 12.0, samples: int = 600) -> tuple:
    """States below the spectrum, on the imaginary momentum axis.

    Zeros of the physical factor at z = iy, y > 0, are bound states;
    zeros of the continued factor at y < 0 are antibound states.  A zero
    of the locator at z = 0 is reported as a virtual state at the lowest
    band edge.
    """
    fac = lambda yy, key: neg_axis_factors(bands, q, yy)[key]
    eps = 1e-8
    r_b = _real_roots(lambda yy: fac(yy, "G_phys"), eps, y_max, samples)
    r_a = _real_roots(lambda yy: fac(yy, "G_phys"), -y_max, -eps, samples)
    out = [
        *(_mk_state(bands, "bound", 1j * y, 0) for y in r_b),
        *(_mk_state(bands, "antibound", 1j * y, 0) for y in r_a),
    ]
    F0 = np.real(locator_many(bands, q, np.array([0.0 + 0j])))[0]
    # compare against the locator scale near the origin only; further up
    # the imaginary axis F grows exponentially and would mask any zero
    Fs = np.real(locator_many(bands, q, (1j * np.linspace(eps, 0.5, 8))))
    if abs(F0) < VIRTUAL_TOL * (np.max(np.abs(Fs)) + 1e-300):
        out.append(_mk_state(bands, "virtual", 0.0 + 0j, 0, residual=abs(F0)))
    out.sort(key=lambda s: np.imag(s.z))
    return tuple(out)


def _winding(vals: np.ndarray) -> np.ndarray:
    ph = np.angle(vals)
    d = np.diff(ph)
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return d


def _contour_count(f, corners: tuple, base_pts: int = 64, max_ref: int = 12) -> int:
    """Zero count inside a rectangle by the argument principle.

    The contour is refined wherever the sampled phase turns by more than
    pi/2 between neighbours, so no increment can be aliased.
    """
    x0, x1, y0, y1 = corners
    pts = []
    for (a, b), m in (((x0 + 1j * y0, x1 + 1j * y0), base_pts),
                      ((x1 + 1j * y0, x1 + 1j * y1), base_pts),
                      ((x1 + 1j * y1, x0 + 1j * y1), base_pts),
                      ((x0 + 1j * y1, x0 + 1j * y0), base_pts)):
        pts.append(a + (b - a) * np.linspace(0.0, 1.0, m, endpoint=False))
    zs = np.concatenate(pts)
    zs = np.append(zs, zs[0])
    vals = np.asarray(f(zs))
    if np.any(np.abs(vals) == 0.0):
        raise ContourThroughZero("locator vanishes on the counting contour")
    for _ in range(max_ref):
        d = _winding(vals)
        bad = np.nonzero(np.abs(d) > 0.5 * np.pi)[0]
        if len(bad) == 0:
            break
        mids = 0.5 * (zs[bad] + zs[bad + 1])
        mvals = np.asarray(f(mids))
        if np.any(np.abs(mvals) == 0.0):
            raise ContourThroughZero("locator vanishes on the counting contour")
        zs = np.insert(zs, bad + 1, mids)
        vals = np.insert(vals, bad + 1, mvals)
    else:
        raise ContourThroughZero("contour refinement did not settle; a zero "
                                 "is too close to the contour")
    total = np.sum(_winding(vals))
    return int(np.round(total / (2.0 * np.pi)))


def _polish(F, z: complex, steps: int = 80) -> complex:
    h = 1e-6 * (1.0 + abs(z))
    for _ in range(steps):
        vals = np.asarray(F(np.array([z, z + h, z - h])))
        f0, fp, fm = complex(vals[0]), complex(vals[1]), complex(vals[2])
        df = (fp - fm) / (2.0 * h)
        if df == 0:
            break
        step = f0 / df
        z = z - step
        if abs(step) < 1e-13 * (1.0 + abs(z)):
            break
    return z


def find_resonances(bands: BandStructure, q: CompactPotential, x_max: float,
                    y_min: float, y_top: float = -1e-3,
                    init_box: float = 2.0) -> tuple:
    """Zeros of the continued Jost function in the open lower half plane.

    The strip [-x_max, x_max] x [y_min, y_top] is tiled with boxes that
    are bisected until each holds at most one zero of the entire locator
    F; the zero is then polished by a secant iteration on F and kept when
    it is a genuine second-sheet zero (not the mirror image of a bound
    state on the positive imaginary axis).
    """
    F = lambda zz: locator_many(bands, q, zz)
    boxes = []
    nx = max(1, int(np.ceil(2.0 * x_max / init_box)))
    ny = max(1, int(np.ceil((y_top - y_min) / init_box)))
    xs = np.linspace(-x_max, x_max, nx + 1)
    ys = np.linspace(y_min, y_top, ny + 1)
    for i in range(nx):
        for j in range(ny):
            boxes.append((xs[i], xs[i + 1], ys[j], ys[j + 1]))

    def _split(x0, x1, y0, y1):
        if x1 - x0 >= y1 - y0:
            xm = 0.5 * (x0 + x1)
            return [(x0, xm, y0, y1), (xm, x1, y0, y1)]
        ym = 0.5 * (y0 + y1)
        return [(x0, x1, y0, ym), (x0, x1, ym, y1)]

    roots = []
    guard = 0
    while boxes and guard < 20000:
        guard += 1
        x0, x1, y0, y1 = boxes.pop()
        try:
            cnt = _contour_count(F, (x0, x1, y0, y1))
        except ContourThroughZero:
            # nudge the box so the offending zero falls inside
            s = 1e-3 * (x1 - x0)
            cnt = _contour_count(F, (x0 - s, x1 + s, y0 - s, y1 + s))
            x0, x1, y0, y1 = x0 - s, x1 + s, y0 - s, y1 + s
        if cnt == 0:
            continue
        if cnt > 1:
            boxes.extend(_split(x0, x1, y0, y1))
            continue
        z = _polish(F, complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)))
        pad = 1e-6 * (1.0 + abs(z))
        inside = (x0 - pad <= z.real <= x1 + pad) and (y0 - pad <= z.imag <= y1 + pad)
        if inside:
            roots.append(z)
        elif min(x1 - x0, y1 - y0) > 1e-6:
            # polishing escaped to a neighbouring zero; tighten the box
            boxes.extend(_split(x0, x1, y0, y1))
        else:
            roots.append(z)

    out = []
    kept = []
    for z in roots:
        if z.imag > -1e-9:
            continue
        if abs(z.real) < 1e-8:
            continue  # imaginary-axis zeros are handled as negative states
        if any(abs(z - w) < 1e-7 * (1.0 + abs(z)) for w in kept):
            continue
        kept.append(z)
        res = abs(complex(locator_many(bands, q, np.array([z]))[0]))
        out.append(_mk_state(bands, "resonance", z, None, residual=res))
    out.sort(key=lambda s: (np.real(s.z), np.imag(s.z)))
    return tuple(out)


def count_second_sheet(bands: BandStructure, q: CompactPotential, r: float,
                       depth_pad: float = 4.0) -> int:
    """Number of second-sheet states with |z| <= r off the real gaps.

    Counts zeros of the entire locator in the lower half disk (taken as
    a rectangle of depth r) and removes the mirror images of the bound
    states on the positive imaginary axis; what remains are the
    resonances and the antibound states below the spectrum.
    """
    t, _, cf = constants(bands.p, q)
    # all second-sheet zeros obey 4 C_F e^{2 Im z ...} >= |z|; depth needed
    depth = min(r, np.log(max(4.0 * cf, 4.0)) / max(2.0 * min(t, 1.0), 0.5) + depth_pad
                + np.log(1.0 + r))
    F = lambda zz: locator_many(bands, q, zz)
    cnt = _contour_count(F, (-r, r, -depth, -1e-4), base_pts=max(256, int(8 * r)))
    neg = find_negative_states(bands, q, y_max=max(depth, 6.0))
    n_bound = sum(1 for s in neg if s.kind == "bound")
    return cnt - n_bound


def counting_slope(bands: BandStructure, q: CompactPotential, radii) -> dict:
    """Least-squares slope of the second-sheet counting function N(r)."""
    radii = np.asarray(sorted(radii), dtype=float)
    counts = np.array([count_second_sheet(bands, q, r) for r in radii], dtype=float)
    A = np.vstack([radii, np.ones_like(radii)]).T
    slope, intercept = np.linalg.lstsq(A, counts, rcond=None)[0]
    return {"radii": radii, "counts": counts, "slope": float(slope),
            "intercept": float(intercept)}


def norming_constant(bands: BandStructure, q: CompactPotential, state: State,
                     route: str = "derivative") -> float:
    """Squared L^2 norm of the Jost solution at a bound state.

    route 'derivative' uses the residue identity
        C = -(Psi^+)'(0) / (2 z) * d/dz Psi_0^+(z),
    route 'integral' integrates |Psi^+|^2 over [0, n_t] and sums the
    geometric Floquet tail.
    """
    if state.kind != "bound":
        raise NotABoundState(f"norming constant requested for a {state.kind} state")
    z = state.z
    n = state.gap
    rim = +1 if (n and n > 0) else None
    pt = surface_point(bands, z if abs(z.real) > 1e-12 else z, rim)

    bd = boundary_data(bands.p, q, np.array([pt.z]))
    m = monodromy_many(bands.p, np.array([pt.z]))
    jv = jost0(bands, q, pt)
    # slope of the Jost solution at the origin
    s = 1j * np.sin(jv.k)
    mp = (complex(m["beta"][0]) + s) / complex(m["phi1"][0])
    psi0p = complex(bd.th0p[0]) + mp * complex(bd.ph0p[0])

    if route == "derivative":
        h = 1e-5 * (1.0 + abs(z))
        if abs(z.real) < 1e-12:
            za, zb = z + 1j * h, z - 1j * h
            fa = jost0(bands, q, surface_point(bands, za)).psi_plus
            fb = jost0(bands, q, surface_point(bands, zb)).psi_plus
            dpsi = (fa - fb) / (2j * h)
        else:
            za, zb = z + h, z - h
            fa = jost0(bands, q, surface_point(bands, za, +1)).psi_plus
            fb = jost0(bands, q, surface_point(bands, zb, +1)).psi_plus
            dpsi = (fa - fb) / (2.0 * h)
        return float(np.real(-psi0p / (2.0 * z) * dpsi))

    if route != "integral":
        raise ValueError("route must be 'derivative' or 'integral'")
    t, n_t, _ = constants(bands.p, q)
    full = lambda x: bands.p(x) + q(x)
    # one period past n_t the solution is purely Floquet, so the periods
    # beyond form a geometric series with ratio |e^{ik}|^2 = e^{-2 Im k}
    end = float(n_t) + 1.0
    grid = np.linspace(0.0, end, 4001)
    tr = propagate_pair(full, np.array([pt.z, pt.z]), 0.0, end,
                        (complex(jv.psi_plus), psi0p, complex(jv.psi_plus), psi0p),
                        t_eval=grid)
    vals = np.abs(tr[0, 0, :]) ** 2
    split = np.searchsorted(grid, float(n_t))
    head = np.trapezoid(vals[: split + 1], grid[: split + 1])
    last = np.trapezoid(vals[split:], grid[split:])
    per = np.exp(-2.0 * np.imag(jv.k))
    return float(head + last / (1.0 - per))


def structural_checks(bands: BandStructure, q: CompactPotential,
                      n_max: int, samples: int = 400,
                      edge_pad: float | None = None) -> dict:
    """Structure of real states against the gap-wise parity laws.

    For each open gap: the total number of states on the two rims and
    edges must be odd and at least 1, an energy cannot be simultaneously
    a bound and an antibound state, and strictly between two adjacent
    bound states inside one gap there must be an odd number of antibound
    states.
    """
    violations = []
    reports = []
    for n in range(1, n_max + 1):
        if bands.is_closed(n):
            continue
        rep = find_gap_states(bands, q, n, samples=samples, edge_pad=edge_pad)
        reports.append(rep)
        total = len(rep.states)
        if total < 1 or total % 2 == 0:
            violations.append((n, "even or empty state count", total))
        zb = sorted(np.real(s.z) for s in rep.states if s.kind == "bound")
        za = [np.real(s.z) for s in rep.states if s.kind == "antibound"]
        for lo, hi in zip(zb[:-1], zb[1:]):
            between = sum(1 for a in za if lo < a < hi)
            if between % 2 == 0:
                violations.append((n, "even antibound count between bound pair",
                                   (lo, hi, between)))
        seen = {}
        for s in rep.states:
            key = round(np.real(s.z), 9)
            if key in seen and {seen[key], s.kind} == {"bound", "antibound"}:
                violations.append((n, "bound and antibound at one energy", key))
            seen[key] = s.kind
    return {"violations": violations, "reports": reports}


def semiclassical_gap_count(bands: BandStructure, q: CompactPotential, n: int,
                            tau: float) -> dict:
    """Dilated-well prediction against the actual gap-state census.

    For q_tau = q(x / tau) the number of bound states produced in the
    energy window [E1, E2] of gap n grows like
        tau * integral_0^t (rho(E2 - q(x)) - rho(E1 - q(x))) dx,
    with rho the integrated density of states of the background, and the
    antibound count on the mirror window exceeds the bound count by at
    least one.
    """
    from .momentum import ids

    if n == 0:
        e1 = -np.inf
        raise ValueError("gap index must be >= 1 for the window count")
    enm, enp = bands.gap(n)
    E1, E2 = enm * enm, enp * enp
    t = q.t

    def integrand(x):
        return ids(bands, E2 - q(x)) - ids(bands, E1 - q(x))

    val, _ = quad(integrand, 0.0, t, limit=200)
    predicted = tau * val

    qt = q.dilate(tau)
    rep = find_gap_states(bands, qt, n, samples=max(800, int(80 * tau)))
    n_bs = sum(1 for s in rep.states if s.kind == "bound")
    n_abs = sum(1 for s in rep.states if s.kind == "antibound")
    return {"predicted": predicted, "bound": n_bs, "antibound": n_abs,
            "report": rep}
