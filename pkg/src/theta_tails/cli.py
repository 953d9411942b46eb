"""Command-line front door: tables, orbit reports, curlicues, tail curves.

Every command is deterministic given its flags; the Monte-Carlo seed
defaults to 0xC0FFEE and can be overridden by --seed or the
THETA_TAILS_SEED environment variable (flag wins). Exact rationals are
printed as "p/q" strings, floats at 9 significant digits.

Exit codes: 0 success, 2 invalid arguments or unsupported request,
3 resource limit, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from .arith import normalize_pair
from .constants import C_of_q, table_reciprocal_C
from .errors import (
    InvalidArgumentError,
    NumericFailureError,
    ResourceLimitError,
    ThetaTailsError,
    UnsupportedOperationError,
)
from .homog import DEFAULT_SEED
from .orbits import (
    DEFAULT_ORBIT_CAP,
    enumerate_orbit,
    orbit_partition,
    orbit_report,
)
from .tailsim import default_thresholds, fit_tail_constant, simulate_theta_tail, simulate_weyl_tail
from .weylsum import WeylSumSpec, partial_sums

FLOAT_DIGITS = ".9g"


def _fmt(value) -> str:
    return format(float(value), FLOAT_DIGITS)


def _json_float(value) -> float:
    return float(_fmt(value))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def _real(text: str) -> float:
    """Exact rationals pass through Fraction; anything else parses as float."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a real number: {text!r}")


def _seed_value(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")


def _thresholds(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"thresholds must be 'lo:hi:steps', got {text!r}"
        )
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        return default_thresholds(lo, hi, steps)
    except (ValueError, InvalidArgumentError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("THETA_TAILS_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError:
            raise InvalidArgumentError(
                f"THETA_TAILS_SEED is not an integer: {env!r}"
            )
    return DEFAULT_SEED


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _pair_of(args):
    return normalize_pair(args.alpha, args.beta)


def cmd_constants(args) -> int:
    table = table_reciprocal_C(args.q_max)
    if args.format == "json":
        rows = [
            {
                "q": q,
                "one_over_C": str(inv),
                "C": _json_float(Fraction(1) / inv),
            }
            for q, inv in enumerate(table, start=1)
        ]
        with _output(args.out) as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        return 0
    with _output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "one_over_C", "C"])
        for q, inv in enumerate(table, start=1):
            writer.writerow([q, str(inv), _fmt(Fraction(1) / inv)])
    return 0


def cmd_orbit(args) -> int:
    pair = _pair_of(args)
    orbit = enumerate_orbit(pair, cap=args.orbit_cap)
    report = orbit_report(orbit, include_points=args.points)
    report["C_of_q"] = str(C_of_q(pair))
    with _output(args.out) as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_partition(args) -> int:
    classes, _ = orbit_partition(args.q)
    if args.format == "json":
        rows = [
            {
                "representative": str(c.representative),
                "size": c.size,
                "size_U": c.size_U,
                "size_V": c.size_V,
            }
            for c in classes
        ]
        payload = {"q": args.q, "classes": rows, "total": sum(c.size for c in classes)}
        with _output(args.out) as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return 0
    with _output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["representative", "size", "size_U", "size_V"])
        for c in classes:
            writer.writerow([str(c.representative), c.size, c.size_U, c.size_V])
    return 0


def cmd_curlicue(args) -> int:
    spec = WeylSumSpec(alpha=args.alpha, beta=args.beta, zeta=0.0, N=args.N)
    sums = partial_sums(args.x, spec)
    if args.format == "json":
        rows = [
            {"k": k, "re": _json_float(v.real), "im": _json_float(v.imag)}
            for k, v in enumerate(sums, start=1)
        ]
        with _output(args.out) as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        return 0
    with _output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "re", "im"])
        for k, v in enumerate(sums, start=1):
            writer.writerow([k, _fmt(v.real), _fmt(v.imag)])
    return 0


def _curve_csv(curve, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["R", "survival", "predicted", "count"])
    for r, s, p, c in curve.rows():
        writer.writerow([_fmt(r), _fmt(s), _fmt(p), c])


def _curve_summary(curve) -> dict:
    try:
        fit = fit_tail_constant(curve)
        fit_payload = {
            "constant": _json_float(fit.constant),
            "stderr": _json_float(fit.stderr) if math.isfinite(fit.stderr) else None,
            "bins": int(fit.used_thresholds.size),
        }
    except InvalidArgumentError:
        fit_payload = None
    return {
        "kind": curve.kind,
        "meta": curve.meta,
        "n_samples": curve.n_samples,
        "seed": curve.seed,
        "predicted_constant": _json_float(curve.predicted_constant),
        "verdict": "compact-support" if curve.meta.get("type") == "C" else "heavy-tail",
        "fit": fit_payload,
    }


def _emit_curve(curve, args) -> int:
    if args.format == "json":
        payload = _curve_summary(curve)
        payload["curve"] = [
            {
                "R": _json_float(r),
                "survival": _json_float(s),
                "predicted": _json_float(p),
                "count": c,
            }
            for r, s, p, c in curve.rows()
        ]
        with _output(args.out) as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return 0
    # CSV: the curve goes to --out (or stdout); when a file takes the
    # curve, the run summary lands on stdout as JSON
    with _output(args.out) as fh:
        _curve_csv(curve, fh)
    if args.out is not None:
        json.dump(_curve_summary(curve), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def cmd_tail(args) -> int:
    pair = _pair_of(args)
    curve = simulate_weyl_tail(
        pair,
        N=args.N,
        r=args.r,
        law=args.law,
        n_samples=args.samples,
        thresholds=args.thresholds,
        seed=_resolve_seed(args),
        workers=args.workers,
    )
    return _emit_curve(curve, args)


def cmd_theta_tail(args) -> int:
    pair = _pair_of(args)
    curve = simulate_theta_tail(
        pair,
        n_samples=args.samples,
        thresholds=args.thresholds,
        seed=_resolve_seed(args),
        workers=args.workers,
        orbit_cap=args.orbit_cap,
    )
    return _emit_curve(curve, args)


def _add_pair_flags(parser) -> None:
    parser.add_argument("--alpha", type=_fraction, default=Fraction(0), help="exact rational, e.g. 1/8")
    parser.add_argument("--beta", type=_fraction, default=Fraction(0), help="exact rational, e.g. 0")


def _add_output_flags(parser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def _add_sim_flags(parser) -> None:
    parser.add_argument("--samples", type=int, default=10**6)
    parser.add_argument("--seed", type=_seed_value, default=None, help="default 0xC0FFEE or THETA_TAILS_SEED")
    parser.add_argument("--thresholds", type=_thresholds, default=None, help="grid 'lo:hi:steps'")
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theta-tails",
        description="Arithmetic constants and tail experiments for quadratic Weyl sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "constants",
        help="reciprocal tail constants 1/C(q)",
        description="Table of q, 1/C(q), C(q). For even q with a single factor "
        "of 2 the table lists the generic branch; numerators that are both odd "
        "give C = 0 and are not tabulated.",
    )
    p.add_argument("--q-max", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("orbit", help="orbit report for a rational pair (JSON)")
    _add_pair_flags(p)
    p.add_argument("--points", action="store_true", help="include the full point list")
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("partition", help="orbit classes of the q-division points")
    p.add_argument("--q", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("curlicue", help="partial-sum trajectory of a Weyl sum")
    _add_pair_flags(p)
    p.add_argument("--x", type=_real, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_curlicue)

    p = sub.add_parser("tail", help="Monte-Carlo tail of |S_N conj(S_rN)|/N")
    _add_pair_flags(p)
    p.add_argument("--N", type=int, default=500)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--law", choices=("normal", "uniform01"), default="normal")
    _add_sim_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("theta-tail", help="Monte-Carlo tail of the theta pairing")
    _add_pair_flags(p)
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    _add_sim_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_theta_tail)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidArgumentError, UnsupportedOperationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ThetaTailsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
