"""Potential representations.

The periodic background is a finite trigonometric series on [0, 1); the
compact perturbation is a piecewise polynomial supported on [0, t].  Both
are chosen so that the Fourier data used downstream is available in closed
form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError

__all__ = [
    "PeriodicPotential",
    "CompactPotential",
    "fourier_p",
    "fourier_q",
    "constants",
    "potentials_from_config",
]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PeriodicPotential:
    """1-periodic real potential  mean + sum_m (a_m cos 2pi m x + b_m sin 2pi m x).

    ``gauge_shift`` is the energy offset subtracted during evaluation so
    that the lowest periodic eigenvalue of the working potential sits at
    zero.  ``mean`` stores the raw (un-gauged) mean.
    """

    mean: float = 0.0
    cos: tuple = ()
    sin: tuple = ()
    gauge_shift: float = 0.0

    @property
    def order(self) -> int:
        return max(len(self.cos), len(self.sin))

    @property
    def p0(self) -> float:
        """Mean of the working (gauged) potential."""
        return self.mean - self.gauge_shift

    def __call__(self, x):
        """Working potential p(x) - gauge_shift; accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        val = np.full(x.shape, self.p0, dtype=float)
        for m, a in enumerate(self.cos, start=1):
            if a:
                val += a * np.cos(_TWO_PI * m * x)
        for m, b in enumerate(self.sin, start=1):
            if b:
                val += b * np.sin(_TWO_PI * m * x)
        return val if val.shape else float(val)

    def with_gauge(self, shift: float) -> "PeriodicPotential":
        return replace(self, gauge_shift=shift)

    def l1_norm(self) -> float:
        """Integral of |p| over one period (working potential)."""
        if not self.cos and not self.sin:
            return abs(self.p0)
        val, _ = quad(lambda x: abs(self(x)), 0.0, 1.0, limit=400)
        return val

    def mean_square(self) -> float:
        """Integral of p^2 over one period, exact for the series form."""
        return self.p0 ** 2 + 0.5 * (
            sum(a * a for a in self.cos) + sum(b * b for b in self.sin)
        )


@dataclass(frozen=True)
class CompactPotential:
    """Real piecewise-polynomial potential supported on [0, t].

    Each piece is ``(x0, x1, coeffs)`` with the polynomial evaluated in the
    local variable u = x - x0.  Pieces are contiguous and ordered; the last
    piece must be nonzero near t unless the whole potential is zero.
    """

    t: float
    pieces: tuple = ()

    def __post_init__(self):
        if self.t <= 0:
            raise ConfigError("support endpoint t must be positive")
        xs = 0.0
        for x0, x1, coeffs in self.pieces:
            if abs(x0 - xs) > 1e-12 or x1 <= x0:
                raise ConfigError("pieces must be contiguous and increasing")
            xs = x1
        if self.pieces:
            if abs(xs - self.t) > 1e-12:
                raise ConfigError("pieces must cover exactly [0, t]")
            x0, x1, coeffs = self.pieces[-1]
            if not self.is_zero and all(abs(c) < 1e-300 for c in coeffs):
                raise ConfigError("representation vanishes near t; shrink t")

    @property
    def is_zero(self) -> bool:
        return all(
            all(abs(c) < 1e-300 for c in coeffs) for _, _, coeffs in self.pieces
        ) or not self.pieces

    @classmethod
    def zero(cls, t: float = 1.0) -> "CompactPotential":
        """The q = 0 perturbation (nominal support parameter t)."""
        return cls(t=t, pieces=())

    @classmethod
    def constant(cls, value: float, t: float = 1.0) -> "CompactPotential":
        return cls(t=t, pieces=((0.0, t, (value,)),))

    @classmethod
    def bump(cls, amplitude: float, t: float = 1.0) -> "CompactPotential":
        """Polynomial bump  A * (4 x (t-x)/t^2)^2  vanishing at 0 and t."""
        c = 16.0 * amplitude / t ** 4
        # c * x^2 (t - x)^2 = c (t^2 x^2 - 2 t x^3 + x^4)
        return cls(t=t, pieces=((0.0, t, (0.0, 0.0, c * t * t, -2.0 * c * t, c)),))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        val = np.zeros(x.shape, dtype=float)
        for x0, x1, coeffs in self.pieces:
            m = (x >= x0) & (x < x1) if x1 < self.t else (x >= x0) & (x <= x1)
            if np.any(m):
                u = x[m] - x0
                acc = np.zeros_like(u)
                for c in reversed(coeffs):
                    acc = acc * u + c
                val[m] = acc
        return val if val.shape else float(val)

    def dilate(self, tau: float) -> "CompactPotential":
        """The stretched potential q(x / tau), supported on [0, tau * t]."""
        pieces = tuple(
            (
                tau * x0,
                tau * x1,
                tuple(c / tau ** k for k, c in enumerate(coeffs)),
            )
            for x0, x1, coeffs in self.pieces
        )
        return CompactPotential(t=tau * self.t, pieces=pieces)

    @property
    def q0(self) -> float:
        return sum(
            sum(c * (x1 - x0) ** (k + 1) / (k + 1) for k, c in enumerate(coeffs))
            for x0, x1, coeffs in self.pieces
        )

    def l1_norm(self) -> float:
        total = 0.0
        for x0, x1, coeffs in self.pieces:
            val, _ = quad(lambda x: abs(self(x)), x0, x1, limit=200)
            total += val
        return total

    def breakpoints(self):
        return [x0 for x0, _, _ in self.pieces] + ([self.pieces[-1][1]] if self.pieces else [0.0, self.t])


def _poly_exp_integral(coeffs, length, a):
    """Integral of sum_k c_k u^k * exp(a u) over u in [0, length], a complex."""
    a = complex(a)
    if abs(a) * max(length, 1.0) < 0.5:
        # power series in a; avoids cancellation at small |a|
        total = 0.0 + 0.0j
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            term_pow = length ** (k + 1)
            s = 0.0 + 0.0j
            am = 1.0 + 0.0j
            for m in range(0, 40):
                inc = am * term_pow / (math.factorial(m) * (k + m + 1))
                s += inc
                if abs(inc) < 1e-18 * max(1.0, abs(s)):
                    break
                am *= a
                term_pow *= length
            total += c * s
        return total
    total = 0.0 + 0.0j
    eaL = np.exp(a * length)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        # antiderivative e^{au} sum_j (-1)^j k!/(k-j)! u^{k-j} / a^{j+1}
        upper = 0.0 + 0.0j
        lower = 0.0 + 0.0j
        for j in range(k + 1):
            fac = ((-1) ** j) * math.factorial(k) / math.factorial(k - j) / a ** (j + 1)
            upper += fac * length ** (k - j)
            if k - j == 0:
                lower += fac
        total += c * (eaL * upper - lower)
    return total


def fourier_p(p: PeriodicPotential, n: int):
    """Fourier data (p0, pcn, psn) of the working potential at harmonic n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pcn = 0.5 * _coef(p.cos, n)
    psn = 0.5 * _coef(p.sin, n)
    return p.p0, pcn, psn


def _coef(seq, n):
    return seq[n - 1] if n <= len(seq) else 0.0


def fourier_q(q: CompactPotential, z) -> complex:
    """Transform  integral_0^t q(x) exp(2 i z x) dx, entire in z."""
    a = 2j * complex(z)
    total = 0.0 + 0.0j
    for x0, x1, coeffs in q.pieces:
        total += np.exp(a * x0) * _poly_exp_integral(coeffs, x1 - x0, a)
    return total


def q_cn(q: CompactPotential, n: int) -> float:
    """Cosine transform value Re q^(pi n)."""
    return float(np.real(fourier_q(q, np.pi * n)))


def constants(p: PeriodicPotential, q: CompactPotential):
    """Support data (t, n_t) and the locator-estimate constant C_F.

    C_F = 3 (||p||_1 + ||p+q||_t) exp(2 ||p+q||_t + ||p||_1) with L1 norms
    over one period and over the support of q.
    """
    t = q.t
    n_t = int(math.ceil(t - 1e-12))
    p1 = p.l1_norm()
    if q.is_zero:
        pq_t = _l1_pplusq(p, CompactPotential.zero(t), t)
    else:
        pq_t = _l1_pplusq(p, q, t)
    cf = 3.0 * (p1 + pq_t) * math.exp(2.0 * pq_t + p1)
    return t, n_t, cf


def _l1_pplusq(p, q, t):
    breaks = sorted(set([0.0, t] + [b for b in q.breakpoints() if 0.0 < b < t]))
    total = 0.0
    for x0, x1 in zip(breaks[:-1], breaks[1:]):
        val, _ = quad(lambda x: abs(p(x) + q(x)), x0, x1, limit=200)
        total += val
    return total


def potentials_from_config(cfg: dict):
    """Build (p, q) from the JSON config mapping.

    Expected shape::

        {"p": {"mean": a0, "cos": [...], "sin": [...]},
         "q": {"t": t, "pieces": [{"x0": .., "x1": .., "coeffs": [..]}, ...]}}
    """
    if "p" not in cfg:
        raise ConfigError("missing 'p' section")
    if "q" not in cfg:
        raise ConfigError("missing 'q' section")
    psec, qsec = cfg["p"], cfg["q"]
    try:
        p = PeriodicPotential(
            mean=float(psec.get("mean", 0.0)),
            cos=tuple(float(a) for a in psec.get("cos", [])),
            sin=tuple(float(b) for b in psec.get("sin", [])),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid 'p' section: {exc}") from exc
    try:
        t = float(qsec["t"])
    except KeyError as exc:
        raise ConfigError("missing 'q.t'") from exc
    pieces = []
    for i, piece in enumerate(qsec.get("pieces", [])):
        try:
            pieces.append(
                (float(piece["x0"]), float(piece["x1"]),
                 tuple(float(c) for c in piece["coeffs"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid 'q.pieces[{i}]': {exc}") from exc
    q = CompactPotential(t=t, pieces=tuple(pieces))
    return p, q
