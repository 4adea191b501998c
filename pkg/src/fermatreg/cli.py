"""Command-line interface.

    fermatreg verify --N 7 --a 1 --b 2 --digits 15 [--json out.json]
    fermatreg table --digits 15 --out table.csv [--json out.json]
    fermatreg coeffs --N 3 --a 1 --b 1 --upto 100000

Exit codes: 0 on success, 2 when a recognized rational mismatches the
expected table value (or nothing was recognized), 3 on structural failure
(insufficient elements, unknown conductor, indeterminate root number).
The coefficient cache directory comes from --cache-dir or $FERMATREG_CACHE_DIR.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import jacobi, verify


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=int, default=15, help="decimal digits (default 15)")
    p.add_argument("--q-max", type=int, default=10 ** 6, help="denominator bound")
    p.add_argument("--tol-exp", type=int, default=None,
                   help="recognition tolerance 10^-exp (default digits-5)")
    p.add_argument("--cache-dir", default=None, help="coefficient cache directory")
    p.add_argument("--parallel", type=int, default=1, help="parallel case workers")
    p.add_argument("--json", dest="json_out", default=None, help="write JSON report here")


def _config(args) -> verify.RunConfig:
    return verify.RunConfig(
        digits=args.digits,
        q_max=args.q_max,
        tol_exp=args.tol_exp,
        cache_dir=args.cache_dir,
        parallelism=args.parallel,
        conductor_override=getattr(args, "conductor", None),
    )


def _print_report(rep: verify.CaseReport) -> None:
    tag = f"({rep.N},{rep.a},{rep.b})"
    if not rep.ok:
        print(f"{tag}: FAILED [{rep.failure}] {rep.message}")
        return
    rec = verify._fmt(rep.recognized, rep.digits) or "none"
    print(
        f"{tag}: g={rep.g} H={{{','.join(map(str, rep.h))}}} eps={rep.epsilon:+d}  "
        f"R~/L* = {verify._fmt(rep.ratio, rep.digits)}  recognized = {rec}"
        + (f"  residual = {verify._fmt(rep.residual, 3)}" if rep.residual is not None else "")
    )


def cmd_verify(args) -> int:
    config = _config(args)
    rep = verify.verify_case(args.N, args.a, args.b, config)
    _print_report(rep)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(verify.reports_to_json([rep]))
    if not rep.ok:
        return 3
    expected = rep.matches_expected()
    if rep.recognized is None or expected is False:
        return 2
    return 0


def cmd_table(args) -> int:
    config = _config(args)
    reports = verify.table_run(config)
    failures = 0
    mismatches = 0
    for rep in reports:
        _print_report(rep)
        if not rep.ok:
            failures += 1
        elif rep.matches_expected() is not True:
            mismatches += 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(verify.reports_to_csv(reports))
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(verify.reports_to_json(reports))
    total = len(reports)
    print(f"{total - failures - mismatches}/{total} rows match the reference table")
    if failures:
        return 3
    if mismatches:
        return 2
    return 0


def cmd_coeffs(args) -> int:
    cache_dir = args.cache_dir or verify.RunConfig(cache_dir=None).effective_cache_dir
    if cache_dir is None:
        print("coeffs: need --cache-dir or $FERMATREG_CACHE_DIR", file=sys.stderr)
        return 3
    coeffs = jacobi.dirichlet_coeffs(args.N, args.a, args.b, args.upto,
                                     cache_dir=cache_dir)
    nonzero = sum(1 for v in coeffs[1:] if v)
    print(f"cached a_1..a_{args.upto} for ({args.N},{args.a},{args.b}) "
          f"({nonzero} nonzero) in {cache_dir}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fermatreg", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify one (N, a, b)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--conductor", type=int, default=None,
                   help="conductor ideal norm for pairs outside the built-in table")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="run all 18 reference rows")
    p.add_argument("--out", default=None, help="write CSV here")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("coeffs", help="prefill the coefficient cache")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_coeffs)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
