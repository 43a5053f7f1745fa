"""Command-line front end: construct, verify and report certificates.

Exit codes: 0 success, 2 usage error, 3 search exhausted, 4 precision
exhausted, 5 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import intervals
from .certificate import (
    build_certificate,
    load_certificate,
    render_report,
    verify_certificate,
    write_certificate,
)
from .construct import (
    DEFAULT_RELATION_BOUND,
    DEFAULT_TORSION_MAX_ORDER,
    build_surface,
    sample_base_points,
    search_curve,
)
from .errors import ParseError, PrecisionExhausted, RealFormsError, SearchExhausted

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SEARCH = 3
EXIT_PRECISION = 4
EXIT_VERIFY = 5

DEFAULT_CONJUGACY_DEPTH = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realforms",
        description="Construct and certify rational surfaces with many real forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    env_bits = int(os.environ.get("REALFORMS_PRECISION_BITS", "128"))
    con = sub.add_parser(
        "construct",
        help="search a curve and points, run the verification pipeline, write a certificate",
    )
    con.add_argument("--r", type=int, required=True, help="number of involutions (>= 3)")
    con.add_argument("--seed", type=int, default=0, help="RNG seed; fixes the output bytes")
    con.add_argument("--precision-bits", type=int, default=env_bits)
    con.add_argument("--precision-ceiling", type=int, default=2048)
    con.add_argument("--relation-bound", type=int, default=DEFAULT_RELATION_BOUND)
    con.add_argument("--torsion-max-order", type=int, default=DEFAULT_TORSION_MAX_ORDER)
    con.add_argument("--conjugacy-depth", type=int, default=DEFAULT_CONJUGACY_DEPTH,
                     help="word length for the brute-force conjugacy oracle (0 = skip)")
    con.add_argument("--out", default="certificate.json")
    con.add_argument("--quiet", action="store_true")

    ver = sub.add_parser("verify", help="replay every derivation step of a certificate")
    ver.add_argument("path")
    ver.add_argument("--quiet", action="store_true")

    rep = sub.add_parser("report", help="human-readable summary of a certificate")
    rep.add_argument("path")
    return parser


def _cmd_construct(args) -> int:
    if args.r < 3:
        print("error: --r must be at least 3 (the construction needs three involutions)",
              file=sys.stderr)
        return EXIT_USAGE
    positives = {
        "--precision-bits": args.precision_bits,
        "--precision-ceiling": args.precision_ceiling,
        "--relation-bound": args.relation_bound,
        "--torsion-max-order": args.torsion_max_order,
    }
    for flag, value in positives.items():
        if value <= 0:
            print(f"error: {flag} must be positive", file=sys.stderr)
            return EXIT_USAGE
    if args.conjugacy_depth < 0:
        print("error: --conjugacy-depth must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    intervals.set_precision_defaults(args.precision_bits, args.precision_ceiling)

    say = (lambda *a: None) if args.quiet else print
    try:
        curve = search_curve(args.seed)
        say(f"curve: {curve!r}")
        points, witness, rejections = sample_base_points(
            curve,
            args.r,
            args.seed,
            relation_bound=args.relation_bound,
            torsion_max_order=args.torsion_max_order,
        )
        say(f"base points accepted: {len(points)} (rejected {len(rejections)})")
        config = build_surface(
            curve, points, args.r, witness, seed=args.seed, bits=args.precision_bits
        )
        say(f"surface configuration: {5 * args.r} points, all real, labelling fixed")
        parameters = {
            "r": args.r,
            "seed": args.seed,
            "precision_bits": args.precision_bits,
            "precision_ceiling": args.precision_ceiling,
            "relation_bound": args.relation_bound,
            "torsion_max_order": args.torsion_max_order,
            "conjugacy_depth": args.conjugacy_depth,
        }
        document = build_certificate(config, parameters)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except RealFormsError as exc:
        print(f"pipeline inconsistency: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    write_certificate(document, args.out)
    say(f"certificate written to {args.out}")
    say(f"verdict: {document['verdict']['claim']} [{document['verdict']['status']}]")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        document = load_certificate(args.path)
    except ParseError as exc:
        print(f"FAIL parse: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    result = verify_certificate(document)
    if result.ok:
        if not args.quiet:
            print(f"PASS ({result.steps_run} steps replayed)")
        return EXIT_OK
    print(f"FAIL at step {result.failed_step}: {result.detail}", file=sys.stderr)
    return EXIT_VERIFY


def _cmd_report(args) -> int:
    try:
        document = load_certificate(args.path)
        sys.stdout.write(render_report(document))
    except ParseError as exc:
        print(f"FAIL parse: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct":
        return _cmd_construct(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_report(args)


if __name__ == "__main__":
    sys.exit(main())
