from fractions import Fraction

import pytest

from piseries.bigfloat import ctx, pi_const, to_mpfr
from piseries.cases import hyper_case, sporadic_case
from piseries.constexpr import parse_const
from piseries.sequences import apery_seq
from piseries.series_eval import (classical_ramanujan_value, SlowConvergence,
                                  eval_weighted_series, inner_t_exact,
                                  u_term_iter)
from piseries.tables import TableRow, load_builtin
from piseries.verify import eval_series, rederive_row, verify_all, verify_row

P = 192


def _row(case, d, x, y, kind, A, B, C, rid="test"):
    return TableRow(id=rid, case=case, discs=(d,) if isinstance(d, int) else d,
                    x=Fraction(x), y=Fraction(y), kind=kind, A=A, B=B,
                    C=parse_const(C))


def test_classical_one_variable_sanity():
    v = classical_ramanujan_value(P)
    with ctx(P):
        assert float(abs(v - 4 / pi_const(P))) < 1e-50


def test_sun_I2_row():
    row = _row(hyper_case("1/2"), -192, "-17/32", Fraction(1, 34 ** 2),
               "n", 30, 7, "12")
    rep = verify_row(row)
    assert rep.status == "pass" and rep.error < 1e-50


def test_x_zero_degenerate():
    row = _row(hyper_case("1/2"), -7, 0, Fraction(1, 4), "n", 5, 7, "1")
    value, terms, tail = eval_series(row, P)
    with ctx(P):
        assert value == 7 and float(tail) == 0.0


def test_series_against_exact_rational_oracle():
    # exact-Fraction partial sums (independent of the mpfr path)
    case = sporadic_case(-17, -6, 72)
    x, y, A, B = Fraction(-71, 1008), Fraction(1, 142 ** 2), 5, -2
    u = apery_seq(case, 60)
    exact = Fraction(0)
    for n in range(61):
        inner = inner_t_exact(n, y)
        exact += u[n] * (A * n + B) * inner * x ** n
    with ctx(P):
        full, _, _ = eval_weighted_series(
            u_term_iter(case, P + 24), to_mpfr(x, P + 24), y, P,
            weight=(A, B), kind="n", growth=case.growth_bound())
        # the exact 61-term sum matches the converged value to the
        # remaining tail of the exact series (|q| ~ 0.64 per term)
        assert float(abs(full - to_mpfr(exact, P + 24))) < 1e-10


def test_m_weight_inner_matches_exact():
    case = hyper_case("1/2")
    x, y = Fraction(-1, 16), Fraction(16)
    u = apery_seq(case, 80)
    exact = Fraction(0)
    for n in range(81):
        inner = 105 * inner_t_exact(n, y, weight_m=True) + 12 * inner_t_exact(n, y)
        exact += u[n] * inner * x ** n
    value, _, _ = eval_weighted_series(
        u_term_iter(case, P + 24), to_mpfr(x, P + 24), y, P,
        weight=(105, 12), kind="m", growth=1.0)
    with ctx(P):
        assert float(abs(value - to_mpfr(exact, P + 24))) < 1e-18


def test_tail_bound_soundness_extension():
    # extending by 200 terms changes the sum by less than the reported tail
    rows = load_builtin("all")
    sample = [r for r in rows if r.id in
              ("17672-420a", "h2-192a", "12432-480b", "9327-1008a", "1131-240a")]
    for row in sample:
        v1, terms, tail = eval_series(row, P)
        # the higher-precision run keeps summing well past the first
        # stopping point, so it serves as the extended reference
        v2, terms2, _ = eval_series(row, P + 150)
        assert terms2 > terms + 100, row.id
        with ctx(P + 150):
            assert float(abs(v1 - v2)) <= max(float(tail), 1e-55), row.id


def test_determinism():
    row = next(r for r in load_builtin("all") if r.id == "728-96a")
    r1 = verify_row(row)
    r2 = verify_row(row)
    assert (r1.error, r1.terms, r1.tail) == (r2.error, r2.terms, r2.tail)


def test_verify_worked_rows():
    rows = load_builtin("all")
    ids = {"17672-420a", "728-240m", "12432-3040c", "h2-16_64a"}
    for row in rows:
        if row.id in ids:
            rep = verify_row(row)
            assert rep.status == "pass", (row.id, rep)


def test_conflict_row_reports_single_passing_variant():
    row = next(r for r in load_builtin("all") if r.id == "728-660m")
    rep = verify_row(row)
    assert rep.status == "pass"
    assert rep.used_alternate
    assert "1 of 2 variants verify" in rep.note


def test_verify_all_filter_and_empty():
    rows = load_builtin("all")
    reports, summary = verify_all(rows, row_filter="^728-96")
    assert summary["rows"] == 1 and summary["passed"] == 1
    reports, summary = verify_all(rows, row_filter="^nothing-matches")
    assert summary["rows"] == 0 and summary["failed"] == 0


def test_tolerance_guard():
    row = next(r for r in load_builtin("all") if r.id == "728-96a")
    with pytest.raises(ValueError):
        verify_row(row, P=96, tol=Fraction(1, 10 ** 40))


def test_rederive_named_rows():
    rows = {r.id: r for r in load_builtin("all")}
    for rid in ("17672-420a", "728-240m", "h2-7m", "1039-96a", "1131-760a"):
        res = rederive_row(rows[rid])
        assert res.status == "pass", (rid, res)


def test_slow_convergence_reported():
    row = _row(sporadic_case(7, 2, -8), -96, Fraction(1, 9), Fraction(1, 4),
               "n", 1, 1, "1")
    with pytest.raises(SlowConvergence):
        eval_series(row, P)
