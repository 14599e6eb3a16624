from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from piseries.cases import SPORADIC_CASES, sporadic_case, hyper_case
from piseries.powerseries import (BiSeries, series_F, substitute_xy, wz_check,
                                  pde_residual, pde_systems, brafman_check)

coeff = st.fractions(max_denominator=6)
sparse = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), coeff, max_size=6)


def naive_mul(a: dict, b: dict, order: int) -> dict:
    out = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            if i1 + i2 + j1 + j2 <= order:
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + v1 * v2
    return {k: v for k, v in out.items() if v}


@given(sparse, sparse)
@settings(max_examples=60, deadline=None)
def test_mul_matches_naive_oracle(a, b):
    D = 6
    sa, sb = BiSeries.from_terms(D, a), BiSeries.from_terms(D, b)
    prod = sa * sb
    assert prod.coeffs == naive_mul(sa.coeffs, sb.coeffs, D)


@given(sparse, sparse)
@settings(max_examples=40, deadline=None)
def test_ring_laws(a, b):
    D = 6
    sa, sb = BiSeries.from_terms(D, a), BiSeries.from_terms(D, b)
    assert (sa + sb).coeffs == (sb + sa).coeffs
    assert (sa * sb).coeffs == (sb * sa).coeffs
    assert ((sa + sb) - sb).coeffs == sa.coeffs


@given(sparse)
@settings(max_examples=40, deadline=None)
def test_theta_operators_commute_and_scale(a):
    s = BiSeries.from_terms(6, a)
    assert s.theta(0).theta(1).coeffs == s.theta(1).theta(0).coeffs
    for (i, j), v in s.coeffs.items():
        assert s.theta(0)[(i, j)] == i * v
        assert s.theta(1)[(i, j)] == j * v


@given(sparse)
@settings(max_examples=40, deadline=None)
def test_inversion(a):
    a[(0, 0)] = Fraction(1) + abs(a.get((0, 0), Fraction(0)))
    s = BiSeries.from_terms(6, a)
    one = s * s.invert()
    assert one[(0, 0)] == 1
    assert all(v == 0 for k, v in one.coeffs.items() if k != (0, 0))


def test_series_F_coefficients():
    F = series_F(sporadic_case(7, 2, -8), 6)
    assert F[(0, 0)] == 1
    assert F[(2, 1)] == 20
    assert F[(1, 1)] == 0


def test_substitute_xy_structure():
    case = sporadic_case(7, 2, -8)
    x, x2y = substitute_xy(case, 8)
    assert x[(0, 0)] == 0
    assert x[(1, 0)] == 1 and x[(0, 1)] == 1
    assert x2y.first_nonzero() == (1, 1) and x2y[(1, 1)] == 1
    with pytest.raises(ValueError):
        substitute_xy(case, 1)


def test_substitute_xy_degenerate_c0():
    # for c = 0 (hypergeometric recurrence shape) x = X + Y - 2aXY exactly
    case = hyper_case("1/2")
    x, _ = substitute_xy(case, 6)
    a = case.a
    expected = {(1, 0): Fraction(1), (0, 1): Fraction(1), (1, 1): -2 * a}
    assert x.coeffs == expected


def test_wz_identity_all_sporadic_order8():
    for case in SPORADIC_CASES.values():
        ok, bad = wz_check(case, 8)
        assert ok, (case, bad)


def test_wz_detects_wrong_sequence():
    # perturbing the recurrence must produce a mismatch, so the check
    # has actual teeth
    import piseries.powerseries as ps
    case = sporadic_case(7, 2, -8)
    real = ps.apery_seq
    try:
        ps.apery_seq = lambda c, N: [v + (n == 3) for n, v in enumerate(real(c, N))]
        ok, bad = ps.wz_check(case, 8)
    finally:
        ps.apery_seq = real
    assert not ok and bad is not None


def test_pde_residuals_all_systems():
    names = pde_systems()
    assert len(names) == 12
    for name in names:
        ok, trusted, details = pde_residual(name, 10)
        assert ok, (name, details)
        assert trusted >= 7


def test_pde_rejects_low_order():
    with pytest.raises(ValueError):
        pde_residual("t2n", 3)


def test_brafman_all_parameters():
    for a in ("1/2", "1/3", "1/4", "1/6"):
        ok, bad = brafman_check(a, 8)
        assert ok, (a, bad)


def test_brafman_first_order_coefficient():
    # coefficient of t^1 on the left side is u_1 P_1(x) = a(1-a) x
    from piseries.sequences import hyper_u
    a = Fraction(1, 3)
    u1 = hyper_u(a, 1)[1]
    assert u1 == Fraction(2, 9)


def test_brafman_rejects_bad_parameter():
    with pytest.raises(ValueError):
        brafman_check(Fraction(1, 5), 8)
