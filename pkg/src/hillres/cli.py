"""Command-line front end.

Subcommands wrap the library layers and emit CSV tables / JSON reports.
All energies in the output are in the original (un-gauged) scale; the
gauge shift applied internally is recorded in each file header.

Exit codes: 0 success, 2 configuration error, 3 structural violation,
4 numerical-tolerance failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import asymptotics, hill, states
from .errors import ConfigError, HillresError
from .potentials import constants, fourier_p, potentials_from_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STRUCTURE = 3
EXIT_TOLERANCE = 4


def _load(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    p, q = potentials_from_config(cfg)
    return cfg, hill.apply_gauge(p), q


def _tol_overrides(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects KEY=VAL, got {item!r}")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise ConfigError(f"--tol {key}: {exc}") from exc
    return out


def _threads(args):
    k = args.threads or int(os.environ.get("HILLRES_THREADS", "0") or 0)
    if k > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(k))
    return k


def _writer(args, name):
    os.makedirs(args.out, exist_ok=True)
    return open(os.path.join(args.out, name), "w", newline="")


def cmd_bands(args):
    cfg, p, q = _load(args.config)
    bands = hill.band_edges(p, args.n_max)
    shift = p.gauge_shift
    with _writer(args, "bands.csv") as fh:
        w = csv.writer(fh)
        w.writerow([f"# gauge_shift={shift!r}"])
        w.writerow(["n", "E_minus", "E_plus", "mu_sq", "gap_length"])
        for n in range(1, args.n_max + 1):
            enm, enp = bands.gap(n)
            lo, hi = enm * enm + shift, enp * enp + shift
            w.writerow([n, repr(lo), repr(hi),
                        repr(bands.mu[n - 1] ** 2 + shift), repr(hi - lo)])
    return EXIT_OK


def _state_rows(bands, reports, negative, resonances, shift):
    rows = []
    for st in negative:
        rows.append((0, st))
    for rep in reports:
        for st in rep.states:
            rows.append((rep.n, st))
    for st in resonances:
        rows.append(("", st))
    out = []
    for n, st in rows:
        z = complex(st.z)
        energy = complex(st.energy)
        etxt = repr(energy.real) if energy.imag == 0.0 else repr(energy)
        out.append([n, repr(z.real), repr(z.imag),
                    st.kind, 1, etxt, repr(float(st.residual))])
    return out


def cmd_states(args):
    cfg, p, q = _load(args.config)
    tol = _tol_overrides(args.tol)
    bands = hill.band_edges(p, args.n_max)
    shift = p.gauge_shift

    samples = int(tol.get("samples", 400))
    edge_pad = tol.get("edge_pad")
    checked = states.structural_checks(bands, q, args.n_max, samples=samples,
                                       edge_pad=edge_pad)
    reports = checked["reports"]
    negative = states.find_negative_states(bands, q)
    x0, x1, y0, y1 = args.region
    resonances = states.find_resonances(bands, q, x_max=max(abs(x0), abs(x1)),
                                        y_min=y0)
    resonances = [s for s in resonances
                  if x0 <= s.z.real <= x1 and y0 <= s.z.imag <= y1
                  and abs(s.z) <= args.z_max]

    with _writer(args, "states.csv") as fh:
        w = csv.writer(fh)
        w.writerow([f"# gauge_shift={shift!r}"])
        w.writerow(["n", "re_z", "im_z", "kind", "multiplicity",
                    "energy", "residual"])
        for row in _state_rows(bands, reports, negative, resonances, shift):
            w.writerow(row)

    with _writer(args, "structure.json") as fh:
        json.dump({"violations": [list(map(str, v)) for v in checked["violations"]],
                   "gaps_checked": [rep.n for rep in reports]}, fh, indent=2)
    if checked["violations"]:
        return EXIT_STRUCTURE
    return EXIT_OK


def cmd_verify(args):
    cfg, p, q = _load(args.config)
    bands = hill.band_edges(p, args.n_max)
    rows, failures = [], []

    for n in range(2, args.n_max + 1):
        mp = asymptotics.mu_prediction(p, n)
        res = (bands.mu[n - 1] - mp.value) / mp.remainder_scale
        rows.append(["mu", n, repr(mp.value), repr(bands.mu[n - 1]), repr(res)])
        em, ep = asymptotics.edge_prediction(p, n)
        enm, enp = bands.gap(n)
        rows.append(["edge-", n, repr(em.value), repr(enm),
                     repr((enm - em.value) / em.remainder_scale)])
        rows.append(["edge+", n, repr(ep.value), repr(enp),
                     repr((enp - ep.value) / ep.remainder_scale)])
        if not bands.is_closed(n):
            hp = asymptotics.hsn_prediction(p, n)
            hm = asymptotics.measured_hsn(bands, n)
            rows.append(["h_sn", n, repr(hp.value), repr(hm),
                         repr((hm - hp.value) / hp.remainder_scale)])

    scaled = [abs(float(r[4])) for r in rows]
    bound = max(scaled) if scaled else 0.0
    tail = [s for r, s in zip(rows, scaled) if r[0] == "mu" and r[1] >= args.n_max - 3]
    head = [s for r, s in zip(rows, scaled) if r[0] == "mu" and r[1] <= 5]
    trend_ok = (not head or not tail or min(head) * 50.0 >= max(tail) or bound < 10.0)
    if not trend_ok:
        failures.append("scaled residual growth")

    with _writer(args, "verify.csv") as fh:
        w = csv.writer(fh)
        w.writerow([f"# gauge_shift={p.gauge_shift!r}"])
        w.writerow(["quantity", "n", "predicted", "computed", "scaled_residual"])
        for row in rows:
            w.writerow(row)
        w.writerow(["verdict", "", "", "", "pass" if not failures else "fail"])
    return EXIT_OK if not failures else EXIT_TOLERANCE


def cmd_count(args):
    cfg, p, q = _load(args.config)
    bands = hill.band_edges(p, args.n_max)
    radii = np.linspace(args.z_max / 3.0, args.z_max, 4)
    fit = states.counting_slope(bands, q, radii)
    target = 2.0 * q.t / np.pi
    with _writer(args, "count.csv") as fh:
        w = csv.writer(fh)
        w.writerow([f"# gauge_shift={p.gauge_shift!r}"])
        w.writerow(["r", "N"])
        for r, c in zip(fit["radii"], fit["counts"]):
            w.writerow([repr(float(r)), int(c)])
        w.writerow(["slope", repr(fit["slope"])])
        w.writerow(["target", repr(target)])
    rel = abs(fit["slope"] - target) / target
    return EXIT_OK if rel < 0.25 else EXIT_TOLERANCE


def _region(text):
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("region must be x0,x1,y0,y1")
    return tuple(parts)


def build_parser():
    ap = argparse.ArgumentParser(prog="hillres",
                                 description="Spectral toolkit for the "
                                 "perturbed Hill operator on the half-line")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON potential config")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--n-max", type=int, default=8)
    common.add_argument("--z-max", type=float, default=30.0)
    common.add_argument("--region", type=_region, default=(-30.0, 30.0, -8.0, 0.0),
                        help="resonance search box x0,x1,y0,y1")
    common.add_argument("--tol", action="append", metavar="KEY=VAL")
    common.add_argument("--threads", type=int, default=0)

    for name, fn in (("bands", cmd_bands), ("states", cmd_states),
                     ("verify", cmd_verify), ("count", cmd_count)):
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _threads(args)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HillresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
