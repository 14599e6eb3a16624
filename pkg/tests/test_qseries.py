from fractions import Fraction
from math import isqrt

from hypothesis import given, settings, strategies as st

from piseries.cases import ALL_CASES, SPORADIC_CASES, sporadic_case, hyper_case
from piseries.qseries import (QSeries, case_f_series, case_t_series, case_tfg,
                              e2, e4, euler_product, eta_quotient,
                              gamma1_5_f, gamma1_5_t, lattice_theta,
                              one, theta2, theta3, theta4, tfg_identity_defect)

frac_list = st.lists(st.fractions(max_denominator=5), min_size=1, max_size=8)


def test_euler_product_against_naive_expansion():
    M = 30
    naive = [Fraction(0)] * (M + 1)
    naive[0] = Fraction(1)
    for n in range(1, M + 1):
        new = list(naive)
        for k in range(M + 1 - n):
            new[k + n] -= naive[k]
        naive = new
    assert list(euler_product(M).coeffs) == naive


@given(frac_list, frac_list)
@settings(max_examples=40, deadline=None)
def test_mul_invert_roundtrip(a, b):
    a[0] = Fraction(1) + abs(a[0])
    M = max(len(a), len(b)) - 1
    sa = QSeries(Fraction(0), tuple(a[:M + 1]))
    prod = sa * sa.invert()
    assert prod[0] == 1 and all(prod[k] == 0 for k in range(1, prod.M + 1))


def test_sqrt_squares_back():
    s = QSeries(Fraction(2), tuple(Fraction(x) for x in (1, 4, -2, 7, 0, 3)))
    r = s.sqrt()
    back = r * r
    assert back.lead == s.lead
    assert all(back[k] == s[k] for k in range(back.M + 1))


def test_theta_q_termwise():
    s = QSeries(Fraction(1, 4), (Fraction(2), Fraction(0), Fraction(5)))
    d = s.theta_q()
    assert d.lead == s.lead
    assert d.coeffs == (Fraction(1, 2), Fraction(0), Fraction(45, 4))


def test_theta_series_against_direct_sums():
    M = 50
    t2 = theta2(M)
    t3 = theta3(M)
    t4 = theta4(M)
    # theta3: coefficient of q^k is #{n: n^2 = k}
    for k in range(M + 1):
        count = sum(1 for n in range(-isqrt(M) - 1, isqrt(M) + 2) if n * n == k)
        assert t3[k] == count
        assert t4[k] == count * (-1) ** isqrt(k) if count else t4[k] == 0
    assert t2.lead == Fraction(1, 4)
    assert t2[0] == 2


def test_jacobi_quartic_identity_exact():
    M = 40
    lhs = theta2(M).pow(4) + theta4(M).pow(4) - theta3(M).pow(4)
    assert all(c == 0 for c in lhs.coeffs)


def test_e2_divisor_sums():
    s = e2(12)
    assert s[0] == 1 and s[1] == -24 and s[2] == -72 and s[6] == -288
    s4 = e4(8)
    assert s4[1] == 240 and s4[2] == 240 * 9


def test_lattice_counts():
    L = lattice_theta(20)
    # r(n) for x^2+xy+y^2: 1, 6, 0, 6, 6, 0, 0, 12, ...
    assert [int(L[k]) for k in range(8)] == [1, 6, 0, 6, 6, 0, 0, 12]


def test_case_series_leads():
    for case in ALL_CASES:
        t = case_t_series(case, 12)
        f = case_f_series(case, 12)
        assert t.lead == 1, case
        assert f.lead == 0 and f[0] == 1, case


def test_t_first_coefficients():
    t = case_t_series(sporadic_case(7, 2, -8), 6)
    assert t.coeffs[:3] == (Fraction(1), Fraction(-3), Fraction(3))
    t5 = case_t_series(sporadic_case(11, 3, -1), 6)
    # q prod (1-q^n)^(5 chi(n)) = q - 5q^2 + 15q^3 - 30q^4 + ...
    assert t5.coeffs[:3] == (Fraction(1), Fraction(-5), Fraction(15))
    th = case_t_series(hyper_case("1/3"), 6)
    assert th[0] == -27


def test_gamma1_5_products_vs_slow_construction():
    M = 25
    chi = {0: 0, 1: 1, 2: -1, 3: -1, 4: 1}
    slow = one(M)
    for n in range(1, M + 1):
        base = [Fraction(0)] * (M + 1)
        base[0] = Fraction(1)
        base[n] = Fraction(-1)
        factor = QSeries(Fraction(0), tuple(base))
        slow = slow * factor.pow(5 * chi[n % 5])
    fast = gamma1_5_t(M)
    assert fast.lead == 1
    assert all(fast[k] == slow[k] for k in range(M - 1))
    f = gamma1_5_f(M)
    assert f[0] == 1


def test_g_identity_sporadic_order_50():
    for case in SPORADIC_CASES.values():
        assert tfg_identity_defect(case, 50) is None, case


def test_g_identity_hyper():
    for a in ("1/2", "1/3", "1/4"):
        assert tfg_identity_defect(hyper_case(a), 40) is None, a


def test_case_tfg_rejects_tiny_order():
    import pytest
    with pytest.raises(ValueError):
        case_tfg(sporadic_case(7, 2, -8), 1)


def test_eta_quotient_lead():
    s = eta_quotient(1, {1: 3, 6: 9, 2: -3, 3: -9}, 8)
    assert s.lead == 1
    s2 = eta_quotient(1, {2: 1, 3: 6, 1: -2, 6: -3}, 8)
    assert s2.lead == 0
