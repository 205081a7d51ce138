"""Command-line front end.

Exit codes: 0 success, 1 no witness found (certify only), 2 bad input
(unknown curve, malformed conductor, unsupported exact enumeration, missing
attestation), 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from .arith import ResourceError
from .counting import CountingError
from .density import (
    DensityReport,
    UnsupportedError,
    empirical_free_fraction,
    enumerate_free_fraction_sl2,
    enumerate_free_fraction_sp4,
    exact_report,
    admissible_prime_set,
)
from .fields import FitError, asymptotic_fit, census
from .obstruction import (
    AttestationError,
    ConductorError,
    ObstructionCertificate,
    certify_cyclic,
    certify_cyclotomic,
    scan_RA,
)
from .registry import CurveRegistry, UnknownCurveError, dump_curve

EXIT_OK, EXIT_NO_WITNESS, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    pass


def parse_int(text: str) -> int:
    """Accept 1000000, 10^6, 10**6 and 1e6."""
    t = text.strip().replace("_", "")
    try:
        for sep in ("**", "^"):
            if sep in t:
                base, exp = t.split(sep)
                return int(base) ** int(exp)
        if "e" in t.lower():
            mant, exp = t.lower().split("e")
            value = Fraction(mant) * 10 ** int(exp)
            if value.denominator != 1:
                raise ValueError
            return int(value)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _registry(args) -> CurveRegistry:
    reg = CurveRegistry.builtin()
    for path in args.registry or ():
        try:
            reg.load(path)
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load registry {path}: {exc}") from None
    return reg


def _curve(args, label):
    try:
        return _registry(args)[label]
    except UnknownCurveError:
        raise InputError(f"unknown curve label {label!r}") from None


def _decades(limit: int) -> list[int]:
    pts = []
    x = 10
    while x < limit:
        pts.append(x)
        x *= 10
    pts.append(limit)
    return pts


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_ra_scan(args) -> int:
    curve = _curve(args, args.label)
    result = scan_RA(curve, args.limit, threads=args.threads)
    rows = []
    for x in _decades(args.limit):
        sub = result.upto(x)
        rows.append((x, sub.count, sub.prime_count, f"{sub.ratio:.4f}"))
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["limit", "count", "pi", "ratio"])
        w.writerows(rows)
    else:
        out = result.to_json()
        out["table"] = [{"limit": x, "count": c, "pi": pi, "ratio": r} for x, c, pi, r in rows]
        _emit_json(out)
    return EXIT_OK


def cmd_certify(args) -> int:
    curve = _curve(args, args.label)
    S = args.exclude or []
    if args.cyclic:
        ell, n = args.cyclic
        result = certify_cyclic(curve, ell, n, S)
    else:
        p, n = args.cyclotomic
        result = certify_cyclotomic(curve, p, n, S)
    _emit_json(result.to_json())
    return EXIT_OK if isinstance(result, ObstructionCertificate) else EXIT_NO_WITNESS


def _auto_beta(args, ell):
    if args.beta not in (None, "auto"):
        try:
            return float(Fraction(args.beta))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad --beta value {args.beta!r}") from None
    if not args.curve:
        return 1.0
    curve = _curve(args, args.curve)
    try:
        report = exact_report(curve, ell)
    except UnsupportedError as exc:
        raise InputError(f"{exc}; pass --beta explicitly") from None
    return float(report.beta)


def cmd_census(args) -> int:
    ell, X = args.ell, args.X
    if ell < 2 or any(ell % q == 0 for q in range(2, math.isqrt(ell) + 1)):
        raise InputError(f"{ell} is not prime")
    beta = _auto_beta(args, ell)
    pts = _decades(X)
    full = census(ell, X, None, samples=pts).samples
    w = csv.writer(sys.stdout, lineterminator="\n")
    fit_input = full
    norm = lambda x, c: f"{c * math.log(x) ** (1 - beta) / x:.4f}" if x > 1 else ""  # noqa: E731
    if args.curve:
        curve = _curve(args, args.curve)
        P = admissible_prime_set(curve, ell, args.exclude or (), X)
        restricted = census(ell, X, P, samples=pts).samples
        w.writerow(["X", "count", "all_count", "ratio", "normalized"])
        for (x, r), (_, f) in zip(restricted, full):
            w.writerow([x, r, f, f"{r / f:.4f}" if f else "", norm(x, r)])
        fit_input = restricted
    else:
        w.writerow(["X", "count", "normalized"])
        for x, c in full:
            w.writerow([x, c, norm(x, c)])
    try:
        fit = asymptotic_fit(fit_input, beta)
        print(
            f"# fit: count ~ c X/(log X)^(1-beta), beta={beta:.4f}, c={fit.c:.4f}, "
            f"max rel. deviation={fit.max_abs_deviation:.4f}",
            file=sys.stderr,
        )
    except FitError as exc:
        print(f"warning: fit skipped: {exc}", file=sys.stderr)
    return EXIT_OK


def cmd_density(args) -> int:
    ell = args.ell
    if args.empirical:
        label, X = args.empirical
        curve = _curve(args, label)
        X = parse_int(X)
        frac, n = empirical_free_fraction(curve, ell, X)
        try:
            out = exact_report(curve, ell).to_json()
        except UnsupportedError:
            out = {"ell": ell}
        out["curve"] = curve.label
        out["empirical"] = [{"X": X, "fraction": round(frac, 4), "sample_size": n}]
        _emit_json(out)
        return EXIT_OK
    try:
        if args.dim == 1:
            report: DensityReport = enumerate_free_fraction_sl2(ell)
        else:
            report = enumerate_free_fraction_sp4(ell)
    except UnsupportedError as exc:
        raise InputError(f"{exc} (use --empirical LABEL X for an estimate)") from None
    _emit_json(report.to_json())
    return EXIT_OK


def cmd_curves(args) -> int:
    reg = _registry(args)
    if args.export:
        os.makedirs(args.export, exist_ok=True)
        for label in reg.labels():
            dump_curve(reg[label], os.path.join(args.export, f"{label}.json"))
    for label in reg.labels():
        c = reg[label]
        print(f"{label}\t{c.kind}\tconductor={c.conductor}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", action="append", metavar="PATH",
                        help="extra curve JSON file or directory (repeatable)")

    ap = argparse.ArgumentParser(prog="punctured", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ra-scan", parents=[common], help="list R_A up to a limit")
    p.add_argument("label")
    p.add_argument("limit", type=parse_int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_ra_scan)

    p = sub.add_parser("certify", parents=[common], help="emptiness certificate for one field")
    p.add_argument("label")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cyclic", nargs=2, type=parse_int, metavar=("ELL", "CONDUCTOR"))
    g.add_argument("--cyclotomic", nargs=2, type=parse_int, metavar=("P", "N"))
    p.add_argument("--exclude", nargs="*", type=parse_int, default=[], metavar="PRIME")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("census", parents=[common], help="count cyclic fields by conductor")
    p.add_argument("ell", type=parse_int)
    p.add_argument("X", type=parse_int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all-primes", action="store_true")
    g.add_argument("--curve", metavar="LABEL")
    p.add_argument("--exclude", nargs="*", type=parse_int, default=[], metavar="PRIME")
    p.add_argument("--beta", default="auto")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("density", parents=[common], help="free-action densities")
    p.add_argument("ell", type=parse_int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dim", type=int, choices=[1, 2])
    g.add_argument("--empirical", nargs=2, metavar=("LABEL", "X"))
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("curves", parents=[common], help="list (or export) registered curves")
    p.add_argument("--export", metavar="DIR")
    p.set_defaults(func=cmd_curves)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConductorError, AttestationError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CountingError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
