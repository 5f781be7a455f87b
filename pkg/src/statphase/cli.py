"""Command line interface.

Exit codes: 0 success, 1 failed check, 2 invalid data or failed
verification, 3 insufficient truncation, 4 unparsable input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import (
    DenominatorMismatch,
    GermSyntaxError,
    InadmissibleGerm,
    InvalidData,
    MismatchedBasePoint,
    StatPhaseError,
    TruncationInsufficient,
)
from .fourier import check_stationary_phase, fourier_transform, inverse_fourier_transform
from .io import (
    dump_data,
    emit_stokes_csv,
    emit_stokes_svg,
    load_data,
    parse_germ,
    parse_point,
    print_germ,
    report_to_json,
)
from .legendre import DEFAULT_PRECISION, RESIDUAL_TOL, classify, legendre_transform
from .oracle import verify_direction, verify_pair
from .puiseux import DirectedGerm, Direction, pole_order
from .stokes import smallest_midpoint, stokes_structure

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_TRUNCATION = 3
EXIT_PARSE = 4

VERIFY_RADII = (20.0, 40.0, 80.0)
VERIFY_REL_TOL = 1e-8
DIRECTION_TOL = 1e-6


def _direction(base, degrees: float, branch: int) -> Direction:
    theta = math.radians(degrees) + 2 * math.pi * branch
    return Direction.from_lift(base, theta, branch + 1)


def _json_out(obj, path) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_transform(args, inverse: bool) -> int:
    data = load_data(args.input)
    run = inverse_fourier_transform if inverse else fourier_transform
    out, report = run(data, args.precision)
    if args.output:
        dump_data(out, args.output)
    else:
        sys.stdout.write(dump_data(out))
    if args.report:
        _json_out(report_to_json(report), args.report)
    for s in report.skipped:
        print(f"skipped {s.reason} factor {print_germ(s.source)} at {s.source_point}", file=sys.stderr)
    return EXIT_OK


def _cmd_legendre(args) -> int:
    base = parse_point(args.base)
    germ = parse_germ(args.germ, base, args.ramification)
    f = DirectedGerm(germ, _direction(base, args.dir, args.branch))
    pair = legendre_transform(f, args.precision)
    g = pair.target
    print(f"case: {pair.case.case.value}")
    print(f"target base: {g.base}")
    print(f"eta: {math.degrees(g.dir.angle):.10g} deg (branch {g.dir.branch})")
    print(f"order: {pair.case.output_pole_order}")
    print(f"beta: {pair.beta.real + 0.0!r} {pair.beta.imag + 0.0!r}i")
    print(f"g: {print_germ(g.germ)}")
    print(f"known to: O(x^({g.germ.known_order}))")
    print(f"residual: {pair.residual:.3e}")
    return EXIT_OK


def _cmd_stokes(args) -> int:
    data = load_data(args.input)
    pd = data.at(parse_point(args.point))
    s = stokes_structure(pd)
    if str(args.output).lower().endswith(".csv"):
        emit_stokes_csv(s, args.output)
    else:
        emit_stokes_svg(s, args.output)
    return EXIT_OK


def _cmd_check(args) -> int:
    data = load_data(args.input)
    if args.point is not None:
        base = parse_point(args.point)
    elif len(data.points) == 1:
        base = data.points[0].point
    else:
        raise InvalidData("--point is required when the data has several points")
    germ = parse_germ(args.germ, base, args.ramification)
    f = DirectedGerm(germ, _direction(base, args.dir, args.branch))
    res = check_stationary_phase(data, f, args.precision)
    note = " (perturbed)" if res.perturbed else ""
    print(f"lhs={res.lhs} rhs={res.rhs} eta={math.degrees(res.eta.angle):.10g} deg{note}")
    return EXIT_OK if res.ok else EXIT_CHECK_FAILED


def _cmd_verify(args) -> int:
    data = load_data(args.input)
    results = []
    ok = True
    for pd in data.points:
        if not pd.factors:
            continue
        start = smallest_midpoint(pd)
        for orbit in pd.factors:
            f = DirectedGerm(orbit.representative, start)
            adm = classify(f)
            if not adm.admissible:
                continue
            q = int(pole_order(f.germ) * f.germ.ramification)
            pair = legendre_transform(f, max(args.precision, q + 2))
            chk = verify_pair(pair, VERIFY_RADII)
            scale = max(abs(s.g_saddle) for s in chk.per_sample)
            rel = chk.max_abs_error / scale if scale else chk.max_abs_error
            ang = verify_direction(f, pair.target.dir)
            passed = pair.residual < RESIDUAL_TOL and ang < DIRECTION_TOL and (rel < VERIFY_REL_TOL or chk.decay_ok)
            ok &= passed
            results.append(
                {
                    "point": str(pd.point),
                    "germ": print_germ(orbit.representative),
                    "residual": pair.residual,
                    "saddle_max_error": chk.max_abs_error,
                    "saddle_rel_error": rel,
                    "fitted_exponent": chk.fitted_exponent,
                    "predicted_exponent": chk.predicted_exponent,
                    "direction_error": ang,
                    "passed": passed,
                }
            )
    _json_out({"checks": results, "passed": ok}, args.output)
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="statphase", description="Legendre and stationary phase transforms of Puiseux germs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_precision(p):
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="lattice steps kept in transformed series")

    for name in ("transform", "inverse-transform"):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} singularity data")
        p.add_argument("input")
        p.add_argument("-o", "--output", help="output data file (default: stdout)")
        p.add_argument("--report", help="write the transform report here")
        add_precision(p)

    p = sub.add_parser("legendre", help="Legendre transform of one directed germ")
    p.add_argument("--base", required=True, help="'inf' or a complex number")
    p.add_argument("--dir", type=float, required=True, help="direction in degrees")
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--germ", required=True)
    p.add_argument("--ramification", type=int)
    add_precision(p)

    p = sub.add_parser("stokes", help="Stokes diagram (SVG or CSV) at one point")
    p.add_argument("input")
    p.add_argument("--point", required=True)
    p.add_argument("-o", "--output", required=True, help="*.svg or *.csv")

    p = sub.add_parser("check", help="stationary phase rank equality for one factor")
    p.add_argument("input")
    p.add_argument("--germ", required=True)
    p.add_argument("--dir", type=float, required=True, help="direction in degrees")
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--point")
    p.add_argument("--ramification", type=int)
    add_precision(p)

    p = sub.add_parser("verify", help="numeric saddle-point checks for every factor")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="report path (default: stdout)")
    add_precision(p)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "transform":
            return _cmd_transform(args, inverse=False)
        if args.command == "inverse-transform":
            return _cmd_transform(args, inverse=True)
        if args.command == "legendre":
            return _cmd_legendre(args)
        if args.command == "stokes":
            return _cmd_stokes(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_verify(args)
    except (GermSyntaxError, DenominatorMismatch) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationInsufficient as exc:
        print(f"truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (InvalidData, InadmissibleGerm, MismatchedBasePoint, StatPhaseError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
