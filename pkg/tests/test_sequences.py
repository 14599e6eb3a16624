from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from piseries.cases import ALL_CASES, SPORADIC_CASES, sporadic_case, hyper_case
from piseries.sequences import (apery_seq, apery_closed, tn, legendre,
                                double_coeff, hyper_u)


def test_recurrence_spec_values():
    assert apery_seq(sporadic_case(7, 2, -8), 2) == [1, 2, 10]
    assert apery_seq(sporadic_case(11, 3, -1), 3) == [1, 3, 19, 147]
    for case in ALL_CASES:
        assert apery_seq(case, 0) == [1]


def test_closed_forms_spec_values():
    assert apery_closed(sporadic_case(-17, -6, 72), 2) == 42
    assert apery_closed(sporadic_case(-9, -3, 27), 3) == -21
    assert apery_closed(sporadic_case(12, 4, 32), 1) == 4


def test_closed_rejects_hyper():
    with pytest.raises(ValueError):
        apery_closed(hyper_case("1/2"), 3)


def test_recurrence_vs_closed_form_to_60():
    for case in SPORADIC_CASES.values():
        seq = apery_seq(case, 60)
        assert all(v.denominator == 1 for v in seq)
        for n in range(61):
            assert int(seq[n]) == apery_closed(case, n), (case, n)


def test_tn_values():
    assert tn(1, Fraction(3), Fraction(5)) == 3
    assert tn(2, 34, 1) == 1158


def test_tn_is_coefficient_of_polynomial_power():
    # oracle: expand (x^2 + b x + c)^n directly
    for n in range(13):
        b, c = Fraction(2, 3), Fraction(-5, 7)
        poly = [Fraction(1)]
        for _ in range(n):
            new = [Fraction(0)] * (len(poly) + 2)
            for i, v in enumerate(poly):
                new[i] += v * c
                new[i + 1] += v * b
                new[i + 2] += v
            poly = new
        assert poly[n] == tn(n, b, c)


@given(st.integers(0, 10), st.fractions(max_denominator=20),
       st.fractions(max_denominator=20),
       st.fractions(max_denominator=8).filter(lambda z: z != 0))
@settings(max_examples=40, deadline=None)
def test_tn_homogeneity(n, b, c, z):
    assert tn(n, b, c) * z ** n == tn(n, b * z, c * z * z)


def test_legendre_values():
    assert legendre(1, 7) == 7
    assert legendre(2, 3) == 13
    assert legendre(4, 1) == 1


def test_legendre_equals_tn():
    for n in range(13):
        for x in (Fraction(1, 2), Fraction(-3), Fraction(7, 5)):
            assert legendre(n, x) == tn(n, x, (x * x - 1) / 4)


def test_combinatorial_identity_grid():
    # sum_m C(n,m)^2 r^m s^(n-m) == sum_m C(2m,m) C(n,2m) (rs)^m (r+s)^(n-2m)
    grid = [Fraction(k, 3) for k in (-4, -1, 1, 2, 5)]
    for n in range(13):
        for r in grid:
            for s in grid:
                lhs = sum(comb(n, m) ** 2 * r ** m * s ** (n - m)
                          for m in range(n + 1))
                rhs = sum(comb(2 * m, m) * comb(n, 2 * m)
                          * (r * s) ** m * (r + s) ** (n - 2 * m)
                          for m in range(n // 2 + 1))
                assert lhs == rhs, (n, r, s)


def test_double_coeff():
    assert double_coeff(4, 1) == 12
    assert double_coeff(7, 0) == 1
    assert double_coeff(5, 2) == 30
    with pytest.raises(ValueError):
        double_coeff(5, 3)


def test_generating_series_annihilated_by_ode():
    # theta^2 - t(a theta^2 + a theta + b) + c t^2 (theta+1)^2 kills sum u_n t^n
    N = 40
    for case in ALL_CASES:
        a, b, c = case.abc
        u = apery_seq(case, N)
        # coefficient of t^n in the image: n^2 u_n - (a(n-1)^2+a(n-1)+b) u_{n-1}
        #                                  + c ((n-2)+1)^2 u_{n-2}
        for n in range(2, N - 1):
            val = (n * n * u[n]
                   - (a * (n - 1) ** 2 + a * (n - 1) + b) * u[n - 1]
                   + c * (n - 1) ** 2 * u[n - 2])
            assert val == 0, (case, n)


def test_hyper_u_product_form():
    u = hyper_u(Fraction(1, 3), 6)
    for n in range(7):
        num = den = Fraction(1)
        for k in range(n):
            num *= (Fraction(1, 3) + k) * (Fraction(2, 3) + k)
            den *= (k + 1) ** 2
        assert u[n] == num / den
