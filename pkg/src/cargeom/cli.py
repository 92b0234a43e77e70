"""Command-line front end: ``cargeom {verify, invariants, park, simulate, circles}``.

Reports are JSON objects ``{"suite", "seed", "checks": [...], "elapsed_ms"}``
written to stdout. Exit status: 0 when every check passes, 1 when a check
fails or errors, 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import lie_sphere as ls
from .car import (
    CarConfig,
    CarParams,
    Trajectory,
    car_fields,
    constraint_residuals,
    execute_maneuver,
    integral_curve_X4,
    plan_parallel_park,
    write_csv,
)
from .distribution import flow
from .errors import CarGeomError, PreconditionError
from .ode import chern_invariant, wunschmann
from .suites import SUITES, CheckResult, run_check, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text, n, what):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what} must be {n} comma-separated numbers, got {text!r}")
    return vals


def _report(suite, seed, checks, start, timing=True, **extra):
    checks = sorted(checks, key=lambda c: c.name)
    out = {
        "suite": suite,
        "seed": int(seed),
        "checks": [c.as_dict() for c in checks],
        "elapsed_ms": round((time.perf_counter() - start) * 1000.0, 3) if timing else 0,
    }
    out.update(extra)
    return out


def _emit(report):
    json.dump(report, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")
    return EXIT_OK if all(c["status"] == "pass" for c in report["checks"]) else EXIT_FAIL


# -- subcommands -----------------------------------------------------------------------


def cmd_verify(args):
    start = time.perf_counter()
    checks = run_suite(args.suite, seed=args.seed, samples=args.samples, tol=args.tol, inject_fault=args.inject_fault)
    return _emit(_report(args.suite, args.seed, checks, start, not args.no_timing))


def cmd_invariants(args):
    from .expr import parse_expr

    start = time.perf_counter()
    try:
        F = parse_expr(args.ode, ("x", "y", "p", "q"))
    except CarGeomError as exc:
        raise UsageError(f"--ode: {exc}") from None
    rng = np.random.default_rng(args.seed)
    pts = rng.uniform(-args.box, args.box, size=(args.points, 4))
    W, C = [], []
    for pt in pts:
        W.append(wunschmann(F, pt))
        C.append(chern_invariant(F, pt))
    W, C = np.abs(W), np.abs(C)
    checks = [
        CheckResult("max_abs_wunschmann", "pass" if W.max() <= args.tol else "fail", float(W.max()), args.tol),
        CheckResult("max_abs_chern", "pass" if C.max() <= args.tol else "fail", float(C.max()), args.tol),
    ]
    stats = {
        "ode": args.ode,
        "wunschmann": {"min": float(np.min(W)), "max": float(np.max(W)), "mean": float(np.mean(W))},
        "chern": {"min": float(np.min(C)), "max": float(np.max(C)), "mean": float(np.mean(C))},
    }
    return _emit(_report("invariants", args.seed, checks, start, not args.no_timing, statistics=stats))


def cmd_park(args):
    start = time.perf_counter()
    try:
        params = CarParams(args.length)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    q0 = CarConfig(*_floats(args.init, 4, "--init")) if args.init else CarConfig(0.0, 0.0, 0.0, 0.0)
    try:
        m = plan_parallel_park(q0, args.offset, params, args.beta0, args.advance)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    traj = execute_maneuver(q0, m, params, args.steps)
    if args.out:
        write_csv(args.out, traj)
    rear, front = constraint_residuals(traj.q, params)
    end_err = float(np.max(np.abs(traj.q[-1] - m.predicted_end.as_array())))
    checks = [
        CheckResult("endpoint_error", "pass" if end_err <= 1e-6 else "fail", end_err, 1e-6),
        run_check("rear_constraint", lambda: np.max(np.abs(rear), initial=0.0), 1e-8),
        run_check("front_constraint", lambda: np.max(np.abs(front), initial=0.0), 1e-8),
    ]
    summary = {
        "segments": [{"field": s.kind, "duration": s.duration} for s in m.segments],
        "noop": len(m.segments) == 0,
        "sweep": m.sweep,
        "drift": m.drift,
        "predicted_end": list(m.predicted_end.as_array()),
        "end": list(map(float, traj.q[-1])),
    }
    return _emit(_report("park", 0, checks, start, not args.no_timing, summary=summary))


def cmd_simulate(args):
    start = time.perf_counter()
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    try:
        params = CarParams(args.length)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    q0 = np.array(_floats(args.init, 4, "--init"))
    _, _, X3, X4 = car_fields(params)
    path = flow(X4 if args.field == "gas" else X3, q0, args.time, args.steps)
    traj = Trajectory(np.linspace(0.0, abs(args.time), args.steps + 1), path, [0])
    if args.out:
        write_csv(args.out, traj)
    else:
        write_csv(sys.stdout, traj)
        return EXIT_OK
    if args.field == "gas":
        expected = integral_curve_X4(q0, args.time, params).as_array()
        name = "closed_form_endpoint"
    else:
        expected = q0 + np.array([0.0, 0.0, 0.0, args.time])
        name = "steer_changes_only_beta"
    err = float(np.max(np.abs(path[-1] - expected)))
    checks = [CheckResult(name, "pass" if err <= 1e-8 else "fail", err, 1e-8)]
    return _emit(_report("simulate", 0, checks, start, not args.no_timing, end=list(map(float, path[-1]))))


def cmd_circles(args):
    start = time.perf_counter()
    circles = [ls.OrientedCircle(*_floats(c, 3, "circle")) for c in args.circles]
    pts = [ls.circle_to_quadric(c) for c in circles]
    n = len(pts)
    incidence = [[ls.incident(pts[i], pts[j], args.tol) for j in range(n)] for i in range(n)]
    polar = [[ls.polar_form(pts[i], pts[j]) for j in range(n)] for i in range(n)]

    def identity():
        worst = 0.0
        for i in range(n):
            for j in range(n):
                worst = max(worst, abs(2 * polar[i][j] + ls.minkowski_interval(circles[i], circles[j])))
        return worst

    checks = [run_check("incidence_is_null_separation", identity, 1e-12)]
    return _emit(
        _report(
            "circles",
            0,
            checks,
            start,
            not args.no_timing,
            circles=[[c.a, c.b, c.R] for c in circles],
            strata=[ls.classify(p) for p in pts],
            incidence=incidence,
            polar_form=polar,
        )
    )


# -- argument parsing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="cargeom", description="Geometry of the kinematic car: verification and simulation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 (byte-stable output)")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--tol", type=float, default=None, help="override every check's tolerance")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    common(v)
    v.set_defaults(func=cmd_verify)

    inv = sub.add_parser("invariants", help="Wunschmann and Chern invariants of y''' = F(x,y,p,q)")
    inv.add_argument("--ode", required=True, help='right-hand side, e.g. "3*p*q^2/(1+p^2)"')
    inv.add_argument("--points", type=int, default=100)
    inv.add_argument("--seed", type=int, default=0)
    inv.add_argument("--box", type=float, default=2.0, help="sample coordinates uniformly in [-box, box]")
    inv.add_argument("--tol", type=float, default=1e-10)
    common(inv)
    inv.set_defaults(func=cmd_invariants)

    pk = sub.add_parser("park", help="plan and execute a parallel-parking maneuver")
    pk.add_argument("--offset", type=float, required=True, help="sideways shift, positive to the right")
    pk.add_argument("--length", type=float, default=1.0)
    pk.add_argument("--beta0", type=float, default=math.pi / 4)
    pk.add_argument("--advance", type=float, default=None, help="net forward displacement to end with")
    pk.add_argument("--init", default=None, help="x,y,alpha,beta (beta must be 0)")
    pk.add_argument("--steps", type=int, default=400, help="RK4 steps per segment")
    pk.add_argument("--out", default=None, help="trajectory CSV path")
    common(pk)
    pk.set_defaults(func=cmd_park)

    sm = sub.add_parser("simulate", help="integrate the gas or steering field")
    sm.add_argument("--init", required=True, help="x,y,alpha,beta")
    sm.add_argument("--field", choices=("gas", "steer"), required=True)
    sm.add_argument("--time", type=float, required=True)
    sm.add_argument("--steps", type=int, default=1000)
    sm.add_argument("--length", type=float, default=1.0)
    sm.add_argument("--out", default=None, help="CSV path (CSV goes to stdout when omitted)")
    common(sm)
    sm.set_defaults(func=cmd_simulate)

    c = sub.add_parser("circles", help="incidence matrix of oriented circles given as a,b,R")
    c.add_argument("circles", nargs="+", help='triples "a,b,R"; put "--" first if one starts with "-"')
    c.add_argument("--tol", type=float, default=1e-12)
    common(c)
    c.set_defaults(func=cmd_circles)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"cargeom: error: {exc}\n")
        return EXIT_USAGE
    except CarGeomError as exc:
        sys.stderr.write(f"cargeom: error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
