"""Command-line front end.

Subcommands build inputs, run verifications and sweeps, and emit JSON or
CSV reports.  Exit code 0 means every asserted inequality passed, 1 means
an assertion failed, 2 means the input was unusable.  Reports are written
canonically (sorted keys), and sweeps are merged by cell index, so a
given config and seed produce byte-identical files at any parallelism.
The AFFAPPROX_THREADS environment variable overrides --parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .affinefit import best_affine_fit, empirical_modulus
from .bounds import (calibrate_constant, delta_net, discretization_scale,
                     modulus_lower_bound, modulus_upper_bound)
from .counterexamples import (CounterexampleSpec, build_bump_path, build_padded_line,
                              build_product_field, certify_ball, certify_interval,
                              certify_window)
from .cube import multiscale_deviation, walsh_bounds_check, walsh_coefficients
from .energy1d import refinement_gain_check, refinement_monotone
from .faceenergy import HQuery, h_report
from .grids import GridFunction1D, GridFunctionCube
from .spaces import NormedSpace
from .util import canonical_json_bytes, jsonify, run_cells

SCHEMA = "1"


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit_json(report: dict, output: str | None) -> None:
    data = canonical_json_bytes(report)
    if output:
        with open(output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _emit_csv(header: list[str], rows: list[list], output: str | None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parallelism(args) -> int:
    env = os.environ.get("AFFAPPROX_THREADS")
    if env:
        return max(1, int(env))
    return max(1, args.parallelism)


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_energy(args) -> tuple[dict, bool]:
    from .spaces import uc_params

    grid = GridFunction1D.from_json(_load_json(args.input))
    p, K = args.p, args.K
    if p is None or K is None:
        p0, K0 = uc_params(grid.space)
        p = p0 if p is None else p
        K = K0 if K is None else K
    report = refinement_gain_check(grid, p, K, tol=args.tolerance)
    monotone = refinement_monotone(grid, p, tol=args.tolerance)
    passed = report.passed and monotone
    return {
        "schema": SCHEMA,
        "command": "energy",
        "report": report.to_json(),
        "monotone": monotone,
        "pass": passed,
    }, passed


def _cmd_walsh(args) -> tuple[dict, bool]:
    cube = GridFunctionCube.from_json(_load_json(args.input))
    eps = args.eps if args.eps is not None else multiscale_deviation(cube)
    check = walsh_bounds_check(cube, eps, tol=args.tolerance)
    coeffs = walsh_coefficients(cube)
    passed = check.coeff_ok and check.approx_ok
    return {
        "schema": SCHEMA,
        "command": "walsh",
        "eps": eps,
        "deviation": multiscale_deviation(cube),
        "check": check.to_json(),
        "coefficients": coeffs.to_json(),
        "pass": passed,
    }, passed


def _cmd_hfunc(args) -> tuple[dict, bool]:
    cube = GridFunctionCube.from_json(_load_json(args.input))
    theta = args.theta if args.theta is not None else cube.theta
    x = tuple(_floats(args.x)) if args.x else tuple(cube.origin.tolist())
    query = HQuery(theta, args.m, args.k, x, args.p)
    rep = h_report(cube.sampler(), query, tol=args.tolerance)
    rep.update({"schema": SCHEMA, "command": "hfunc"})
    return rep, bool(rep["pass"])


def _cmd_fit(args) -> tuple[dict, bool]:
    obj = _load_json(args.input)
    space = NormedSpace.from_json(obj["space"])
    pts = np.asarray(obj["points"], dtype=np.float64)
    vals = np.asarray(obj["values"], dtype=np.float64)
    result = best_affine_fit((pts, vals), space, tol=args.tolerance, max_iter=args.max_iter)
    passed = result.lower_certificate <= result.sup_error + args.tolerance
    return {
        "schema": SCHEMA,
        "command": "fit",
        "result": result.to_json(),
        "pass": passed,
    }, passed


def _cmd_r_search(args) -> tuple[dict, bool]:
    cube = GridFunctionCube.from_json(_load_json(args.input))
    if args.source:
        source = NormedSpace.from_json(_load_json(args.source))
    else:
        source = NormedSpace.lq(2.0, cube.n)
    radii = [2.0 ** (-j) for j in range(args.radii_levels + 1)] if args.radii_levels is not None else None
    report, sweep = empirical_modulus(
        cube, source, args.eps, radii=radii, tol=args.tolerance,
        max_iter=args.max_iter, parallelism=_parallelism(args), return_sweep=True)
    if args.csv:
        header = ["rho"] + [f"center_{i}" for i in range(cube.n)] + ["sup_error", "certificate", "pass"]
        rows = [[row["rho"], *row["center"], row["sup_error"], row["certificate"], row["pass"]]
                for row in sweep]
        _emit_csv(header, rows, args.csv)
    passed = True  # the search itself asserts nothing; reports are data
    return {
        "schema": SCHEMA,
        "command": "r-search",
        "report": report.to_json(),
        "candidates": len(sweep),
        "pass": passed,
    }, passed


def _interval_sweep(spec: CounterexampleSpec, parallelism: int) -> list[dict]:
    path = build_bump_path(spec)
    denom = 1 << spec.m
    cells = [(i, j) for i in range(denom) for j in range(i + 4, denom + 1)]

    def work(cell):
        i, j = cell
        rep = certify_interval(spec, i / denom, j / denom, path)
        return {"m": spec.m, "p": spec.p, "window": [i / denom, j / denom],
                "certificate": rep.certificate, "threshold": rep.threshold,
                "pass": rep.passed}

    return run_cells(work, cells, parallelism)


def _window_sweep(spec: CounterexampleSpec, parallelism: int) -> list[dict]:
    line = build_padded_line(spec)
    rootn = math.sqrt(spec.n)
    r_min = 32.0 / (rootn * (1 << spec.m))
    radii = []
    r = r_min
    while r <= 16.0 / rootn:
        radii.append(r)
        r *= 2.0
    centers = [c / rootn for c in (-1.0, -0.5, 0.0, 0.5, 1.0)]
    cells = [(y, r) for r in radii for y in centers]

    def work(cell):
        y, r = cell
        rep = certify_window(spec, y, r, line)
        return {"m": spec.m, "p": spec.p, "window": [y - r, y + r],
                "certificate": rep.certificate, "threshold": rep.threshold,
                "pass": rep.passed}

    return run_cells(work, cells, parallelism)


def _ball_sweep(spec: CounterexampleSpec, parallelism: int) -> list[dict]:
    field = build_product_field(spec)
    rootn = math.sqrt(spec.n)
    r_min = 32.0 / (rootn * (1 << spec.m))
    radii = []
    r = r_min
    while r <= 0.5:
        radii.append(r)
        r *= 2.0
    if not radii:
        radii = [r_min]
    centers = [np.zeros(spec.n)]
    shift = np.zeros(spec.n)
    shift[0] = 0.25
    centers.append(shift)
    cells = [(y, r) for r in radii for y in centers if float(np.linalg.norm(y)) <= 1.0 - r]

    def work(cell):
        y, r = cell
        rep = certify_ball(spec, y, r, field)
        return {"m": spec.m, "p": spec.p, "window": [y.tolist(), r],
                "certificate": rep.certificate, "threshold": rep.threshold,
                "pass": rep.passed}

    return run_cells(work, cells, parallelism)


def _cmd_counterexample(args) -> tuple[dict, bool]:
    spec = CounterexampleSpec(args.m, args.p, args.n)
    if args.sweep:
        if args.family == "interval":
            rows = _interval_sweep(spec, _parallelism(args))
        elif args.family == "window":
            rows = _window_sweep(spec, _parallelism(args))
        else:
            rows = _ball_sweep(spec, _parallelism(args))
        passed = all(row["pass"] for row in rows)
        return {
            "schema": SCHEMA,
            "command": "counterexample",
            "family": args.family,
            "rows": rows,
            "pass": passed,
        }, passed
    if args.family == "interval":
        if args.a is None or args.b is None:
            raise ValueError("interval certification needs --a and --b (or --sweep)")
        rep = certify_interval(spec, args.a, args.b)
    elif args.family == "window":
        if args.y is None or args.r is None:
            raise ValueError("window certification needs --y and --r (or --sweep)")
        rep = certify_window(spec, args.y, args.r)
    else:
        if args.center is None or args.r is None:
            raise ValueError("ball certification needs --center and --r (or --sweep)")
        rep = certify_ball(spec, np.asarray(_floats(args.center)), args.r)
    out = {"schema": SCHEMA, "command": "counterexample", "family": args.family}
    out.update(rep.to_json())
    return out, rep.passed


def _cmd_bounds(args) -> tuple[list[list], bool]:
    rows = []
    for eps in _floats(args.eps):
        if args.variant in ("general", "sharp1d"):
            val = modulus_lower_bound(args.n, args.p, args.K, eps, args.variant)
        else:
            val = modulus_upper_bound(args.n, args.p, eps, args.variant)
        rows.append([args.n, args.p, args.K, eps, args.variant, val.log2])
    return rows, True


def _cmd_net(args) -> tuple[dict, bool]:
    space = NormedSpace.lq(args.q, args.dim)
    result = delta_net(space, args.delta, args.seed, samples=args.samples)
    passed = result.separation_ok and result.covering_ok
    report = {"schema": SCHEMA, "command": "net", "pass": passed}
    report.update(result.to_json())
    return report, passed


def _cmd_calibrate(args) -> tuple[dict, bool]:
    c_value = calibrate_constant(args.n, args.p, args.K, args.eps, args.D, c=args.c)
    delta = discretization_scale(args.n, args.p, args.K, args.eps, c_value)
    from .bounds import extension_radius

    rho = extension_radius(args.n, args.p, args.K, args.eps, args.D, c=args.c)
    margin = rho.log2 + math.log2(args.eps / (64.0 * args.n)) - delta.log2
    passed = margin >= 0.0
    return {
        "schema": SCHEMA,
        "command": "calibrate",
        "C": c_value,
        "log2_delta": delta.log2,
        "log2_rho": rho.log2,
        "closure_margin_log2": margin,
        "pass": passed,
    }, passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affapprox",
                                     description="Affine-approximability lab")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tolerance", type=float, default=1e-9)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--parallelism", type=int, default=1)
        sp.add_argument("--output", type=str, default=None)

    sp = sub.add_parser("energy", help="dyadic energy checks on a 1-D grid file")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--K", type=float, default=None)

    sp = sub.add_parser("walsh", help="multilinear coefficient/approximation checks")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--eps", type=float, default=None)

    sp = sub.add_parser("hfunc", help="face-averaged line energy of a cube grid")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--theta", type=float, default=None)
    sp.add_argument("--x", type=str, default=None)

    sp = sub.add_parser("fit", help="certified sup-norm affine fit of a sample file")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--max-iter", type=int, default=2000)

    sp = sub.add_parser("r-search", help="empirical affine-approximability modulus")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--source", type=str, default=None)
    sp.add_argument("--radii-levels", type=int, default=None)
    sp.add_argument("--max-iter", type=int, default=600)
    sp.add_argument("--csv", type=str, default=None)

    sp = sub.add_parser("counterexample", help="certificates of the hard instances")
    common(sp)
    sp.add_argument("--family", choices=("interval", "window", "ball"), required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--sweep", action="store_true")
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--y", type=float, default=None)
    sp.add_argument("--r", type=float, default=None)
    sp.add_argument("--center", type=str, default=None)

    sp = sub.add_parser("bounds", help="log-domain bound evaluation (CSV)")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--eps", type=str, required=True)
    sp.add_argument("--variant", choices=("general", "sharp1d", "interval", "ball"),
                    required=True)

    sp = sub.add_parser("net", help="greedy delta-net of an ell_q unit ball")
    common(sp)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--samples", type=int, default=10_000)

    sp = sub.add_parser("calibrate", help="minimal feasible net-fineness constant")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--D", type=float, required=True)
    sp.add_argument("--c", type=float, default=2.0)

    return parser


_DISPATCH = {
    "energy": _cmd_energy,
    "walsh": _cmd_walsh,
    "hfunc": _cmd_hfunc,
    "fit": _cmd_fit,
    "r-search": _cmd_r_search,
    "counterexample": _cmd_counterexample,
    "net": _cmd_net,
    "calibrate": _cmd_calibrate,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bounds":
            rows, passed = _cmd_bounds(args)
            _emit_csv(["n", "p", "K", "eps", "variant", "log2_value"], rows, args.output)
            return 0 if passed else 1
        report, passed = _DISPATCH[args.command](args)
        _emit_json(jsonify(report), args.output)
        return 0 if passed else 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
