"""Command-line front end.

Exit codes: 0 pass, 1 verified-property violation, 2 usage or config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import functionals as fn
from . import kottler as kt
from . import mass as ms
from .config import ConfigError, load_config
from .solver import NonMeanConvex, NumericalOverflow, run
from .warped import AmbientModel

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _ambient_from_args(args) -> AmbientModel:
    theta, genus = args.theta, args.genus
    if args.epsilon == -1 and theta is None and genus is None:
        theta = 4.0 * math.pi
    try:
        return AmbientModel(args.n, args.epsilon, theta, genus)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _add_ambient_flags(p, mass=True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=int, required=True, choices=(0, -1))
    p.add_argument("--theta", type=float, help="cross-section area (default: torus or 4 pi)")
    p.add_argument("--genus", type=int)
    if mass:
        p.add_argument("--mass", type=float, required=True)


def _kottler_params(args) -> kt.KottlerParams:
    amb = _ambient_from_args(args)
    if not args.mass > 0:
        raise _UsageError(f"--mass must be positive, got {args.mass}")
    return kt.KottlerParams(amb, args.mass)


def _header(args) -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return "config: " + " ".join(f"{k}={v}" for k, v in items.items())


def cmd_kottler(args) -> int:
    p = _kottler_params(args)
    amb, n, m = p.ambient, p.n, p.m
    r_h = kt.horizon_radius(p)
    area = amb.theta * r_h ** (n - 1)
    m_back = kt.mass_from_area(area, amb)
    m_bdry = kt.kottler_boundary_mass(p)
    r = np.linspace(r_h * 1.05, 10 * r_h + 10, 20)
    R = kt.scalar_curvature(r, p)
    stat = kt.staticity_residual(p, r)
    rad, tan = kt.sectional_curvatures(r[0], p)
    checks = [
        ("f(r_h) = 0", abs(kt.f_eval(r_h, p)) / (2 * m), 1e-12),
        ("mass_from_area round trip", abs(m_back - m) / m, 1e-10),
        ("boundary mass = m", abs(m_bdry - m) / m, 1e-10),
        ("scalar curvature = -n(n-1)", float(np.max(np.abs(R + n * (n - 1)))), 1e-10),
        ("staticity residual", float(np.max(stat)), 1e-8),
    ]
    print(f"n={n} epsilon={p.epsilon} theta={amb.theta:.12g} m={m:.12g}")
    print(f"r_h                 {r_h:.15g}")
    print(f"horizon area        {area:.15g}")
    print(f"mass_from_area      {m_back:.15g}")
    print(f"boundary mass       {m_bdry:.15g}")
    print(f"critical mass       {kt.critical_mass(n):.15g}")
    print(f"K(radial), K(tang.) at r={r[0]:.6g}: {rad:.12g}, {tan:.12g}")
    ok = True
    for name, val, tol in checks:
        passed = val <= tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {val:.3e} (tol {tol:g})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_embed(args) -> int:
    amb = _ambient_from_args(args)
    if args.mass < 0:
        raise _UsageError("--mass must be >= 0")
    p = kt.KottlerParams(amb, args.mass)
    try:
        table = kt.embedding_profile(p, args.r_max, args.step)
    except kt.InvalidParameter as exc:
        raise _UsageError(str(exc)) from None
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write(f"# {_header(args)}\n")
        out.write("r,u,dudr\n")
        for r, u, d in table:
            out.write(f"{float(r)!r},{float(u)!r},{float(d)!r}\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_flow(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        raise _UsageError(str(exc)) from None
    except ConfigError as exc:
        raise _UsageError(f"{args.config}: {exc}") from None
    out = args.out or cfg.output.get("trace")
    if not out:
        raise _UsageError("no trace path: pass --out or set [output] trace")
    try:
        trace = run(cfg.initial_state(), cfg.solver)
    except (NonMeanConvex, NumericalOverflow) as exc:
        print(f"numerical failure: {exc} (abort time t={exc.t})", file=sys.stderr)
        return EXIT_NUMERIC
    trace.to_csv(out, comment="config:\n" + cfg.resolved())
    last = trace.rows[-1]
    print(f"records         {len(trace)}")
    print(f"final t         {last['t']:.12g}")
    print(f"final L         {last['L']:.12g}")
    print(f"final af_def    {last['af_deficit']:.12g}")
    print(f"mean u - t/(n-1) {trace.mean_tilde_u[-1]:.12g}")
    n = cfg.ambient.n
    t, ex = trace["t"], trace["maxH"] - (n - 1)
    sel = (t >= 0.5 * t[-1]) & (t > 0)
    if np.count_nonzero(sel) >= 3 and np.all(ex[sel] > 0):
        k, C, r2 = fn.fit_decay_exponent(t[sel], ex[sel])
        print(f"H decay exponent {k:.6g} (expected {2.0 / (n - 1):.6g}, R2={r2:.4f})")
    else:
        print("H decay exponent n/a (no excess over n-1)")
    print(f"trace written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise _UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES) + ['all']}")
    reports = run_suite(args.suite)
    print(fn.reports_table(reports))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(f"# {_header(args)}\n")
            fh.write(fn.reports_to_csv(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_mass(args) -> int:
    amb = _ambient_from_args(args)
    if args.profile:
        try:
            profile = ms.profile_from_csv(args.profile, amb)
        except OSError as exc:
            raise _UsageError(str(exc)) from None
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
    else:
        if args.mass is None or not args.mass > 0:
            raise _UsageError("give --profile or a positive --mass")
        profile = ms.RadialMetricProfile.kottler(kt.KottlerParams(amb, args.mass))
    dec = ms.graph_mass_formula(profile)
    r0 = profile.r_min
    area = amb.theta * r0 ** (amb.n - 1)
    cert = ms.penrose_certificate(area, amb, dec.total, tolerance=args.tol)
    print(f"profile       {profile.label}")
    print(f"bulk          {dec.bulk:.12g}")
    print(f"boundary      {dec.boundary:.12g}")
    print(f"total         {dec.total:.12g}")
    print(cert.text())
    if args.flux_csv:
        r_hi = profile.r_max if math.isfinite(profile.r_max) else 1000.0 * max(r0, 1.0)
        radii = np.geomspace(max(2.0 * r0, r0 + 1.0), r_hi, 25)
        with open(args.flux_csv, "w") as fh:
            fh.write(f"# {_header(args)}\n")
            fh.write("r,flux_mass\n")
            for r in radii:
                try:
                    val = ms.flux_mass_at(profile, float(r))
                except ms.LinearizationError:
                    continue
                fh.write(f"{float(r)!r},{val!r}\n")
    return EXIT_OK if cert.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alhimcf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kottler", help="horizon, mass-area and curvature checks")
    _add_ambient_flags(p)
    p.set_defaults(func=cmd_kottler)

    p = sub.add_parser("embed", help="tabulate the Kottler graph u(r)")
    _add_ambient_flags(p)
    p.add_argument("--r-max", type=float, default=50.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("flow", help="run the inverse mean curvature flow from a config file")
    p.add_argument("config")
    p.add_argument("--out", help="trace CSV (overrides [output] trace)")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--csv", help="also write the reports as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mass", help="graph mass formula and Penrose certificate")
    _add_ambient_flags(p, mass=False)
    p.add_argument("--mass", type=float)
    p.add_argument("--profile", help="CSV with columns r,psi2 or r,u,dudr")
    p.add_argument("--flux-csv", help="write flux mass versus r")
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_mass)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
