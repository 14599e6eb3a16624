"""Command-line interface.

Subcommands:
  verify     verify table rows: sum each series and compare with C/pi
  wz         formal product-identity check for a sporadic case
  pde        formal PDE residual for one of the twelve systems
  cm         CM points, orbit labels, and normalizer action table
  modular    t, f, x, y, F and the series residual at a pair of points
  constants  CM-pair invariants t, eps, delta and B1, C1, B2, C2
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .bigfloat import ctx, parse_mpc, recognize_rational
from .cases import case_from_tag
from .cmconstants import case_at_cm, theorem_constants
from .cmpoints import atkin_lehner, classify_orbit, cm_points, find_cm_pair
from .modular import bimodular_xyF, double_series_residual
from .powerseries import brafman_check, pde_residual, pde_systems, wz_check
from .series_eval import SlowConvergence
from .tables import load_builtin, load_path
from .verify import (DEFAULT_MAX_TERMS, rederive_row, reports_to_json,
                     verify_all)


def _bits(digits: int) -> int:
    return max(64, int(digits * 3.322) + 16)


def cmd_verify(args):
    rows = load_path(args.tables) if args.tables else load_builtin("all")
    P = _bits(args.digits)
    tol = Fraction(1, 10 ** args.tol_digits)
    t0 = time.monotonic()

    def progress(rep):
        mark = "ok " if rep.status == "pass" else rep.status.upper()
        err = "-" if rep.error is None else f"{rep.error:.2e}"
        extra = f"  [{rep.note}]" if rep.note else ""
        print(f"  {mark} {rep.id:14s} err={err:>9s} terms={rep.terms}{extra}")

    reports, summary = verify_all(rows, P=P, tol=tol,
                                  max_terms=args.max_terms,
                                  row_filter=args.rows,
                                  progress=progress if args.verbose else None)
    if args.rederive:
        print("re-deriving row constants from CM pairs:")
        bad = 0
        for row in rows:
            if args.rows and not __import__("re").search(args.rows, row.id):
                continue
            res = rederive_row(row, P=P)
            ok = res.status == "pass"
            bad += not ok
            print(f"  {'ok ' if ok else res.status.upper()} {row.id:14s} "
                  f"pair={res.pair} B_err={res.B_err} C_err={res.C_err} {res.note}")
        summary["rederive_failures"] = bad
    summary["wall_seconds"] = round(time.monotonic() - t0, 3)
    for rep in reports:
        if rep.status != "pass" or rep.note:
            err = "-" if rep.error is None else f"{rep.error:.3e}"
            print(f"{rep.status.upper():5s} {rep.id:14s} err={err}  {rep.note}")
    print(json.dumps(summary))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
        print(f"wrote {args.json}")
    return 0 if summary["failed"] == summary["errors"] == 0 else 1


def cmd_wz(args):
    case = case_from_tag(args.case)
    t0 = time.monotonic()
    ok, bad = wz_check(case, args.order)
    dt = time.monotonic() - t0
    print(f"wz {case!r} order {args.order}: "
          f"{'pass' if ok else f'FAIL at {bad}'} ({dt:.3f}s)")
    return 0 if ok else 1


def cmd_pde(args):
    systems = [args.system] if args.system != "all" else pde_systems()
    failures = 0
    for s in systems:
        t0 = time.monotonic()
        ok, trusted, details = pde_residual(s, args.order)
        dt = time.monotonic() - t0
        failures += not ok
        print(f"pde {s:16s} order {args.order} trusted<= {trusted}: "
              f"{'pass' if ok else f'FAIL {details}'} ({dt:.3f}s)")
    return 0 if failures == 0 else 1


def cmd_brafman(args):
    ok, bad = brafman_check(Fraction(args.a), args.order)
    print(f"brafman a={args.a} order {args.order}: "
          f"{'pass' if ok else f'FAIL at {bad}'}")
    return 0 if ok else 1


def cmd_cm(args):
    pts = cm_points(args.level, args.disc)
    print(f"{len(pts)} classes of discriminant {args.disc} at level {args.level}:")
    for Q in pts:
        line = f"  {Q}"
        if args.orbits and args.level in (8, 9):
            line += f"  orbit {classify_orbit(args.level, Q)}"
        print(line)
    if args.actions:
        for m in _normalizer_tags(args.level):
            images = [atkin_lehner(args.level, Q, m) for Q in pts]
            print(f"  w_{m}: " + ", ".join(f"{q}" for q in images))
    return 0


def _normalizer_tags(N):
    return {2: [2], 3: [3], 4: [4], 5: [5], 6: [2, 3, 6], 8: [8], 9: [9]}[N]


def cmd_modular(args):
    case = case_from_tag(args.case)
    P = _bits(args.digits)
    tau1 = parse_mpc(args.tau1, P)
    tau2 = parse_mpc(args.tau2, P)
    vals = bimodular_xyF(case, tau1, tau2, P)
    for name in ("t1", "t2", "f1", "f2", "x", "y", "F"):
        print(f"{name} = {getattr(vals, name)}")
    try:
        res = double_series_residual(case, tau1, tau2, P)
        print(f"|F - double series| = {res}")
    except (SlowConvergence, ValueError) as exc:
        print(f"double series unavailable here: {exc}")
    return 0


def cmd_constants(args):
    case = case_from_tag(args.case)
    P = _bits(args.digits)
    if args.x is not None:
        Q1, Q2 = find_cm_pair(case, tuple(args.disc),
                              Fraction(args.x), Fraction(args.y))
    else:
        pts1 = cm_points(case.level, args.disc[0],
                         gamma1=(case.label == "1131"))
        d2 = args.disc[1] if len(args.disc) > 1 else args.disc[0]
        pts2 = cm_points(case.level, d2, gamma1=(case.label == "1131"))
        Q1, Q2 = pts1[0], pts2[1 if d2 == args.disc[0] else 0]
    print(f"pair: {Q1} {Q2}")
    cc = case_at_cm(case, Q1, Q2, P)
    with ctx(P):
        for name, v in [("t1", cc.t1), ("t2", cc.t2), ("eps", cc.eps),
                        ("delta1", cc.delta1), ("delta2", cc.delta2)]:
            print(f"{name} = {v}")
        B1, C1, B2, C2 = theorem_constants(cc, P)
        for name, v in [("B1", B1), ("C1", C1), ("B2", B2), ("C2", C2)]:
            r = recognize_rational(v, 10 ** 8, Fraction(1, 10 ** (args.digits - 8)))
            print(f"{name} = {v}" + (f"  (= {r})" if r is not None else ""))
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(prog="piseries", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify table rows against C/pi")
    p.add_argument("--tables", help="table file (default: packaged data)")
    p.add_argument("--digits", type=int, default=58,
                   help="working precision in decimal digits (default 58 = 192 bits)")
    p.add_argument("--tol", dest="tol_digits", type=int, default=25,
                   help="tolerance 10^-TOL (default 25)")
    p.add_argument("--rows", help="regex filter on row ids")
    p.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    p.add_argument("--rederive", action="store_true",
                   help="also re-derive each row's constants from its CM pair")
    p.add_argument("--json", help="write a JSON report to this path")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wz", help="formal two-variable product identity check")
    p.add_argument("--case", required=True, help='e.g. "7,2,-8"')
    p.add_argument("--order", type=int, default=8)
    p.set_defaults(func=cmd_wz)

    p = sub.add_parser("pde", help="formal PDE residual check")
    p.add_argument("--system", default="all",
                   help="one of: " + ", ".join(pde_systems()) + ", or all")
    p.add_argument("--order", type=int, default=10)
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("brafman", help="Brafman product formula check")
    p.add_argument("--a", required=True, help="1/2, 1/3, 1/4 or 1/6")
    p.add_argument("--order", type=int, default=8)
    p.set_defaults(func=cmd_brafman)

    p = sub.add_parser("cm", help="CM points at a level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--orbits", action="store_true")
    p.add_argument("--actions", action="store_true")
    p.set_defaults(func=cmd_cm)

    p = sub.add_parser("modular", help="bimodular values at a point pair")
    p.add_argument("--case", required=True)
    p.add_argument("--tau1", required=True, help='e.g. "0.1+0.9i"')
    p.add_argument("--tau2", required=True)
    p.add_argument("--digits", type=int, default=40)
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("constants", help="CM-pair series constants")
    p.add_argument("--case", required=True)
    p.add_argument("--disc", type=int, nargs="+", required=True)
    p.add_argument("--x", help="optional exact x to pin the pair")
    p.add_argument("--y", help="optional exact y to pin the pair")
    p.add_argument("--digits", type=int, default=48)
    p.set_defaults(func=cmd_constants)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
