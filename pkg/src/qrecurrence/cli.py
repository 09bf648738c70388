"""Command-line front end.

Exit codes: 0 success, 2 bad input or parameters, 3 a verification or
property check failed, 4 file or JSON errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import applicable_bounds
from .diophantine import diff_approx
from .errors import PreconditionError, VerificationError
from .io import approx_input_from_dict, approx_to_dict, certificate_to_dict, dumps, load_spectrum
from .oracle import brute_min_q, mc_volume_T, same_tile_pairs, scan_first_recurrence, two_point_violations
from .recurrence import find_recurrence_constructive, verify_certificate
from .tiling import METHODS, check_T_partition_rows, volume_T

EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4
PRECISIONS = ("float", "extended", "rational")


def _meta(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out") and v is not None}
    return {
        "tool": "qrecurrence",
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "precision": args.precision,
        "config": config,
    }


def _csv_header(args) -> str:
    return "".join(f"# {k}: {json.dumps(v, sort_keys=True)}\n" for k, v in _meta(args).items())


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _method(name: str) -> str:
    return name.replace("-", "_")


def _parse_alpha(token: str, precision: str):
    # rational precision reads decimals exactly; otherwise as doubles
    if "/" in token or precision == "rational":
        return Fraction(token)
    return float(token)


# --- subcommands -----------------------------------------------------------

def cmd_bounds(args) -> int:
    reports = applicable_bounds(args.mode, args.d, args.epsilon, span=args.span, max_R=args.max_r)
    buf = io.StringIO()
    buf.write(_csv_header(args))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "value", "adjusted_value", "N_used", "note"])
    for r in reports:
        adj = "" if r.adjusted_value is None else repr(float(r.adjusted_value))
        w.writerow([r.theorem, repr(float(r.value)), adj, r.N_used, r.note])
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_recur(args) -> int:
    s = load_spectrum(args.spectrum)
    if args.mode and args.mode != s.mode:
        raise PreconditionError(f"--mode {args.mode} does not match the spectrum file ({s.mode})")
    cert = find_recurrence_constructive(s, args.epsilon, _method(args.method))
    ok, violations = verify_certificate(cert, s)
    doc = {"meta": _meta(args), "certificate": certificate_to_dict(cert),
           "verification": {"ok": ok, "violations": violations}}
    _emit(args, dumps(doc))
    unit = "steps" if s.mode == "discrete" else "time units"
    print(
        f"recurrence at {cert.recurrence_time!r} {unit} = {cert.multiplier} x {cert.base_time!r}; "
        f"worst case {cert.worst_case_at_tr:.3g} <= {cert.epsilon}; "
        f"{cert.bound_used} bound {cert.bound_value:.6g}; verified: {ok}",
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_approx(args) -> int:
    if args.input:
        with open(args.input) as fh:
            req = approx_input_from_dict(json.load(fh))
    else:
        if not args.alphas or args.N is None:
            raise PreconditionError("give an input file or both --alphas and --N")
        req = {"alphas": [_parse_alpha(a, args.precision) for a in args.alphas], "N": args.N}
        if args.integer_pair:
            req["integer_pair"] = tuple(args.integer_pair)
    if args.method:
        req["method"] = args.method
    req["method"] = _method(req.get("method", "simplex_hull"))
    res = diff_approx(req["alphas"], req["N"], req["method"], req.get("integer_pair"))
    doc = {"meta": _meta(args), "approximation": approx_to_dict(res)}
    if args.oracle:
        found = brute_min_q(req["alphas"], req["N"], res.q)
        doc["oracle"] = {"brute_min_q": None if found is None else found[0],
                         "l": None if found is None else list(found[1])}
    _emit(args, dumps(doc))
    return EXIT_OK


def cmd_scan(args) -> int:
    s = load_spectrum(args.spectrum)
    rep = scan_first_recurrence(s, args.epsilon, args.t_step, args.t_max)
    _emit(args, _csv_header(args) + rep.to_csv())
    summary = {"meta": _meta(args), "summary": rep.summary()}
    if args.summary:
        Path(args.summary).write_text(dumps(summary))
    else:
        print(dumps(summary), end="", file=sys.stderr)
    return EXIT_OK


def cmd_volume(args) -> int:
    est, se = mc_volume_T(args.d, args.N, args.samples, args.seed)
    exact = volume_T(args.d, args.N)
    z = abs(est - float(exact)) / se if se > 0 else (0.0 if est == float(exact) else math.inf)
    doc = {"meta": _meta(args), "estimate": est, "std_error": se,
           "exact": [exact.numerator, exact.denominator], "z_score": z}
    _emit(args, dumps(doc))
    return EXIT_OK


def cmd_tiles(args) -> int:
    D = args.d - 1
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([args.seed, 0])))
    X = rng.uniform(-2.0, 2.0, size=(args.samples, D))
    roundtrip, unique = check_T_partition_rows(X, args.N)
    rows = [("simplex_hull", "round_trip", int(roundtrip.sum()), args.samples),
            ("simplex_hull", "unit_perturbation", int(unique.sum()), args.samples)]
    for m in METHODS:
        Y, Z = same_tile_pairs(m, D, args.N, args.samples, args.seed)
        bad = two_point_violations(Y, Z, args.N)
        rows.append((m, "two_point", args.samples - bad, args.samples))
    buf = io.StringIO()
    buf.write(_csv_header(args))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "check", "passed", "total"])
    w.writerows(rows)
    _emit(args, buf.getvalue())
    failed = sum(total - passed for _, _, passed, total in rows)
    print(f"tile checks: {len(rows)} run, {failed} failures", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrecurrence", description="Certified recurrence times for finite quantum systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", choices=PRECISIONS, default="float",
                        help="how decimal alphas are read; all certificates are checked exactly")
    methods = [m.replace("_", "-") for m in METHODS]
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="table of applicable recurrence-time bounds")
    b.add_argument("--mode", choices=("continuous", "discrete"), default="continuous")
    b.add_argument("--d", type=int, required=True, help="number of distinct eigenvalues")
    b.add_argument("--epsilon", type=float, required=True)
    b.add_argument("--span", type=float, help="E_max - E_min (continuous)")
    b.add_argument("--max-r", type=float, help="largest circle distance between phases (discrete)")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("recur", parents=[common], help="construct and verify a recurrence certificate")
    r.add_argument("spectrum", help="spectrum JSON file")
    r.add_argument("--mode", choices=("continuous", "discrete"))
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--method", choices=methods + ["all"], default="simplex-hull")
    r.set_defaults(func=cmd_recur)

    a = sub.add_parser("approx", parents=[common], help="difference approximation of reals")
    a.add_argument("input", nargs="?", help="JSON request with alphas or rational_alphas, N, method")
    a.add_argument("--alphas", nargs="+", help="reals, decimals or p/q fractions")
    a.add_argument("--N", type=int)
    a.add_argument("--method", choices=methods)
    a.add_argument("--integer-pair", type=int, nargs=2, metavar=("I", "J"),
                   help="0-based indices whose alpha difference is an integer")
    a.add_argument("--oracle", action="store_true", help="also report the brute-force minimal q")
    a.set_defaults(func=cmd_approx)

    s = sub.add_parser("scan", parents=[common], help="grid scan of the worst-case distance")
    s.add_argument("spectrum")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--t-step", type=float, default=1.0)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--summary", help="write the JSON summary here instead of stderr")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("volume", parents=[common], help="Monte Carlo volume of the tile T")
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--N", type=int, required=True)
    v.add_argument("--samples", type=int, default=10**6)
    v.set_defaults(func=cmd_volume)

    t = sub.add_parser("tiles", parents=[common], help="partition and two-point checks for all tile shapes")
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--samples", type=int, default=10**4)
    t.set_defaults(func=cmd_tiles)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
