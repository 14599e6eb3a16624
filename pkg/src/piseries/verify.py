"""Row verification: evaluate each table row's weighted double series at
high precision, compare against C/pi, and optionally re-derive the
row's constants from its CM pair.

Defaults: 192-bit precision, tolerance 10^-25, at most 10^5 terms.
A report records the achieved error, the certified tail bound at the
stopping point, term count, wall time, and any documented-conflict
resolution (rows carrying alt_x / alt_y / alt_C values).
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, asdict
from fractions import Fraction

import gmpy2

from .bigfloat import ctx, pi_const, to_mpfr, GUARD
from .cmconstants import case_at_cm, theorem_constants
from .cmpoints import find_cm_pair, PairNotFound
from .constexpr import eval_const
from .series_eval import eval_weighted_series, u_term_iter, SlowConvergence
from .tables import TableRow

DEFAULT_P = 192
DEFAULT_TOL = Fraction(1, 10 ** 25)
DEFAULT_MAX_TERMS = 100_000


def eval_series(row: TableRow, P: int = DEFAULT_P,
                max_terms: int = DEFAULT_MAX_TERMS, y=None):
    """(value, terms, tail_bound) for the row's series at precision P."""
    yy = row.y if y is None else y
    return eval_weighted_series(
        u_term_iter(row.case, P + 24),
        to_mpfr(row.x, P + 24), yy, P,
        weight=(row.A, row.B), kind=row.kind,
        max_terms=max_terms, growth=row.case.growth_bound(),
        name=row.id)


@dataclass
class VerifyReport:
    id: str
    status: str                 # "pass" | "fail" | "error"
    error: float | None
    terms: int
    seconds: float
    precision_bits: int
    tail: float | None = None
    used_alternate: bool = False
    note: str = ""

    def json_dict(self):
        return asdict(self)


def verify_row(row: TableRow, P: int = DEFAULT_P, tol=DEFAULT_TOL,
               max_terms: int = DEFAULT_MAX_TERMS) -> VerifyReport:
    """Compare the series against C/pi; pass iff both the achieved error
    and the certified tail bound are below tol.

    Rows with alternate values encode a documented conflict between two
    quoted readings; both are tried and the report says which verifies."""
    tol_f = to_mpfr(Fraction(tol), P)
    if not tol_f >= gmpy2.exp2(-(P - 24)):
        raise ValueError("tolerance finer than the working precision allows")
    max_terms = int(row.options.get("max_terms", max_terms))
    start = time.monotonic()
    variants = [(row, False)]
    if row.has_alternate():
        variants.append((row.alternate(), True))
    last_exc = None
    passed = []
    result = None
    for variant, is_alt in variants:
        with ctx(P + GUARD):
            target = eval_const(variant.C, P + GUARD) / pi_const(P + GUARD)
        try:
            value, terms, tail = eval_series(variant, P, max_terms)
        except SlowConvergence as exc:
            last_exc = exc
            continue
        with ctx(P + GUARD):
            err = abs(value - target)
        ok = bool(err < tol_f) and bool(tail < tol_f)
        rep = VerifyReport(
            id=row.id, status="pass" if ok else "fail",
            error=float(err), terms=terms,
            seconds=round(time.monotonic() - start, 6),
            precision_bits=P, tail=float(tail), used_alternate=is_alt)
        if ok:
            passed.append(rep)
        if result is None or ok:
            result = rep
    if result is None:
        if last_exc is not None and "not absolutely summable" in str(last_exc):
            # boundary row (certified term ratio exactly 1): the series
            # cannot be summed directly with a geometric tail, so certify
            # the identity on the modular side by re-deriving the row's
            # constants from its CM pair at the same tolerance.
            red = rederive_row(row, P=P)
            ok = red.status == "pass"
            return VerifyReport(
                id=row.id, status="pass" if ok else "fail",
                error=max(red.B_err, red.C_err) if ok else None,
                terms=0, seconds=round(time.monotonic() - start, 6),
                precision_bits=P,
                note=("term ratio 1 (boundary row): certified via CM "
                      f"rederivation, pair {red.pair}" if ok else
                      f"boundary row and rederivation failed: {red.note}"))
        return VerifyReport(id=row.id, status="error", error=None, terms=0,
                            seconds=round(time.monotonic() - start, 6),
                            precision_bits=P, note=str(last_exc))
    if row.has_alternate():
        kept = "alternate" if result.used_alternate else "primary"
        result.note = (f"documented value conflict: {len(passed)} of "
                       f"{len(variants)} variants verify; kept {kept}")
    return result


def verify_all(rows, P: int = DEFAULT_P, tol=DEFAULT_TOL,
               max_terms: int = DEFAULT_MAX_TERMS,
               row_filter: str | None = None, progress=None):
    """Verify every (selected) row; returns (reports, summary dict)."""
    if row_filter:
        pattern = re.compile(row_filter)
        rows = [r for r in rows if pattern.search(r.id)]
    reports = []
    for row in rows:
        rep = verify_row(row, P=P, tol=tol, max_terms=max_terms)
        reports.append(rep)
        if progress:
            progress(rep)
    reports.sort(key=lambda r: r.id)
    summary = {
        "rows": len(reports),
        "passed": sum(r.status == "pass" for r in reports),
        "failed": sum(r.status == "fail" for r in reports),
        "errors": sum(r.status == "error" for r in reports),
        "conflicts": [r.id for r in reports if "conflict" in r.note],
        "seconds": round(sum(r.seconds for r in reports), 3),
    }
    return reports, summary


def reports_to_json(reports) -> str:
    return json.dumps([r.json_dict() for r in reports], indent=2)


@dataclass
class RederiveResult:
    id: str
    status: str
    pair: tuple | None = None
    B_over_A: str = ""
    C_over_A: str = ""
    B_err: float | None = None
    C_err: float | None = None
    note: str = ""


def rederive_row(row: TableRow, P: int = DEFAULT_P,
                 tol=Fraction(1, 10 ** 25)) -> RederiveResult:
    """Find the row's CM pair and re-derive (B, C) from the analytic
    constants; pass iff B_k = B/A and C_k = C/A to tol.

    For the a=1/4 family only |C| is compared (the square root leaves
    the sign of the weight-1 form unpinned there)."""
    note = ""
    try:
        Q1, Q2 = find_cm_pair(row.case, row.discs, row.x, row.y, P=160)
    except PairNotFound as exc:
        if row.has_alternate():
            row = row.alternate()
            try:
                Q1, Q2 = find_cm_pair(row.case, row.discs, row.x, row.y, P=160)
                note = "pair found for the documented alternate values"
            except PairNotFound as exc2:
                return RederiveResult(id=row.id, status="no-pair", note=str(exc2))
        else:
            return RederiveResult(id=row.id, status="no-pair", note=str(exc))
    cc = case_at_cm(row.case, Q1, Q2, P + GUARD)
    B1, C1, B2, C2 = theorem_constants(cc, P)
    Bk, Ck = (B1, C1) if row.kind == "n" else (B2, C2)
    with ctx(P):
        b_target = to_mpfr(Fraction(row.B, row.A), P)
        c_target = eval_const(row.C, P) / row.A
        b_err = abs(Bk - b_target)
        abs_cmp = row.case.f_recipe[0] == "sqrt_e2"
        c_err = abs(abs(Ck) - c_target) if abs_cmp else abs(Ck - c_target)
        tol_f = to_mpfr(Fraction(tol), P)
        ok = bool(b_err < tol_f) and bool(c_err < tol_f)
    if not ok and row.has_alternate():
        res = rederive_row(row.alternate(), P=P, tol=tol)
        res.id = row.id
        res.note = (res.note + "; " if res.note else "") + \
            "re-derived with the documented alternate values"
        return res
    return RederiveResult(
        id=row.id, status="pass" if ok else "fail",
        pair=(str(Q1), str(Q2)),
        B_over_A=str(Fraction(row.B, row.A)),
        C_over_A=f"{row.C}/{row.A}",
        B_err=float(b_err), C_err=float(c_err), note=note)
