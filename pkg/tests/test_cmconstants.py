from fractions import Fraction

import gmpy2
import pytest

from piseries.bigfloat import agree_bits, ctx, recognize_rational
from piseries.cases import SPORADIC_CASES, hyper_case, sporadic_case
from piseries.cmconstants import (case_at_cm, delta, h_and_theta_q_h, h_at_cm,
                                  lemma_pi_residual, theorem_constants,
                                  theta_partials, theta_q_slash2)
from piseries.cmpoints import QuadForm, cm_points, tau_alpha
from piseries.modular import case_tgg
from piseries.quadfield import QuadNum, mat_det

P = 192

# at least two CM points on each of the four sporadic curve families
LEMMA_POINTS = [
    (sporadic_case(7, 2, -8), QuadForm(6, 6, 19)),
    (sporadic_case(7, 2, -8), QuadForm(6, 0, 4)),       # d = -96
    (sporadic_case(10, 3, 9), QuadForm(12, 12, 5)),     # d = -96
    (sporadic_case(-17, -6, 72), QuadForm(6, 6, 2)),    # d = -12
    (sporadic_case(-17, -6, 72), QuadForm(30, 30, 11)),
    (sporadic_case(12, 4, 32), QuadForm(8, 4, 4)),      # d = -112
    (sporadic_case(12, 4, 32), QuadForm(8, 0, 15)),     # d = -480
    (sporadic_case(-9, -3, 27), QuadForm(9, 0, 28)),    # d = -1008
    (sporadic_case(-9, -3, 27), QuadForm(36, 0, 7)),
    (sporadic_case(11, 3, -1), QuadForm(5, 0, 38)),     # d = -760
    (sporadic_case(11, 3, -1), QuadForm(10, 0, 19)),
]


def test_h_is_minus_one_at_cm_points():
    for case, Q in LEMMA_POINTS:
        h = h_at_cm(case, Q, P)
        with ctx(P):
            assert float(abs(h + 1)) < 1e-40, (case, Q)


def test_lemma_residual_across_families():
    for case, Q in LEMMA_POINTS:
        res = lemma_pi_residual(case, Q, P)
        assert float(res) < 1e-30, (case, Q)


def test_lemma_rhs_value_example():
    # Im tau([6,6,2]) = sqrt(3)/6, so the right side is sqrt(3)/pi = 0.5513...
    Q = QuadForm(6, 6, 2)
    with ctx(96):
        rhs = 1 / (2 * gmpy2.const_pi() * gmpy2.sqrt(gmpy2.mpfr(3)) / 6)
        assert str(rhs).startswith("0.5513")


def test_lemma_residual_shrinks_with_precision():
    case, Q = sporadic_case(7, 2, -8), QuadForm(6, 0, 4)
    r128 = float(lemma_pi_residual(case, Q, 128))
    r256 = float(lemma_pi_residual(case, Q, 256))
    assert r128 < 1e-25
    assert r256 < max(r128 * 1e-15, 1e-70)


def test_theta_q_h_against_finite_differences():
    # independent oracle: central difference of h(tau) off the fixed point
    case, Q = sporadic_case(-17, -6, 72), QuadForm(6, 6, 19)
    tau, alpha = tau_alpha(Q)
    Pw = 320
    _, th_exact = h_and_theta_q_h(case, alpha, tau, Pw)

    def h_num(tau_n):
        a, b, c, d = alpha
        with ctx(Pw):
            _, g, _ = case_tgg(case, tau_n, Pw)
            at = (a * tau_n + b) / (c * tau_n + d)
            _, g_a, _ = case_tgg(case, at, Pw)
            return mat_det(alpha) / (c * tau_n + d) ** 2 * g_a / g

    with ctx(Pw):
        eps = gmpy2.exp2(-100)
        tau_n = tau.to_mpc(Pw)
        deriv = (h_num(tau_n + eps) - h_num(tau_n - eps)) / (2 * eps)
        th_fd = deriv / (2j * gmpy2.const_pi())
        assert float(abs(th_fd - th_exact)) < 1e-40


def test_delta_two_precision_consistency():
    case = sporadic_case(7, 2, -8)
    for Q in cm_points(6, -96)[:2]:
        d1 = delta(case, Q, 128)
        d2 = delta(case, Q, 256)
        assert agree_bits(d1, d2) >= 104


def test_delta_real_at_symmetric_points():
    case = sporadic_case(-17, -6, 72)
    for Q in (QuadForm(6, 6, 19), QuadForm(30, 30, 11)):
        d = delta(case, Q, P)
        assert float(abs(d.imag)) < 1e-40


def test_theta_partials_against_jacobian_oracle():
    import sympy as sp
    X, Y = sp.symbols("X Y")
    for case in (sporadic_case(7, 2, -8), sporadic_case(-9, -3, 27)):
        a, c = int(case.a), int(case.c)
        nx = (X + Y) * (1 + c * X * Y) - 2 * a * X * Y
        x = nx / (1 - c * X * Y) ** 2
        y = (X * Y * (1 - a * X + c * X ** 2) * (1 - a * Y + c * Y ** 2)) / nx ** 2
        J = sp.Matrix([[sp.diff(x, X), sp.diff(x, Y)],
                       [sp.diff(y, X), sp.diff(y, Y)]])
        Jinv = J.inv()
        pts = [(Fraction(1, 7), Fraction(2, 11)), (Fraction(-1, 5), Fraction(3, 8))]
        for Xv, Yv in pts:
            subs = {X: sp.Rational(Xv.numerator, Xv.denominator),
                    Y: sp.Rational(Yv.numerator, Yv.denominator)}
            txX, txY, tyX, tyY = theta_partials(case, Xv, Yv)
            want_txX = sp.Rational(
                (x * Jinv[0, 0] / X).subs(subs).simplify()) * Xv
            want_txY = sp.Rational((x * Jinv[1, 0]).subs(subs).simplify())
            want_tyX = sp.Rational((y * Jinv[0, 1]).subs(subs).simplify())
            want_tyY = sp.Rational((y * Jinv[1, 1]).subs(subs).simplify())
            assert Fraction(int(want_txX.p), int(want_txX.q)) * 1 == txX * 1 or \
                sp.Rational(txX.numerator, txX.denominator) == want_txX
            assert sp.Rational(txY.numerator, txY.denominator) == want_txY
            assert sp.Rational(tyX.numerator, tyX.denominator) == want_tyX
            assert sp.Rational(tyY.numerator, tyY.denominator) == want_tyY


def test_theta_partials_denominator_factorization():
    # 1 - a(X+Y) + c(X^2+4XY+Y^2) - acXY(X+Y) + c^2 X^2 Y^2
    #   = (1 - alpha(X+Y) + cXY)(1 - beta(X+Y) + cXY)
    for case in SPORADIC_CASES.values():
        a, c = case.a, case.c
        al, be = case.alpha, case.beta
        X, Y = Fraction(2, 7), Fraction(-3, 5)
        s, p = X + Y, X * Y
        lhs = (1 - a * s + c * (X * X + 4 * p + Y * Y) - a * c * p * s
               + c * c * p * p)
        rhs = (1 - al * s + c * p) * (1 - be * s + c * p)
        if isinstance(rhs, QuadNum):
            assert rhs.is_rational() and rhs.p == lhs
        else:
            assert rhs == lhs


def test_theta_partials_c0_specialization():
    # with (a, c) = (1, 0): theta_x X = X (1 - X) / (1 - (X + Y))
    case = hyper_case("1/2")
    X, Y = Fraction(1, 9), Fraction(1, 5)
    txX, txY, _, _ = theta_partials(case, X, Y)
    assert txX == X * (1 - X) / (1 - (X + Y))
    assert txY == Y * (1 - Y) / (1 - (X + Y))


def test_theta_partials_pole_at_diagonal():
    with pytest.raises(ZeroDivisionError):
        theta_partials(sporadic_case(7, 2, -8), Fraction(1, 3), Fraction(1, 3))


def test_worked_example_d420():
    case = sporadic_case(-17, -6, 72)
    cc = case_at_cm(case, QuadForm(6, 6, 19), QuadForm(30, 30, 11), P)
    B1, C1, B2, C2 = theorem_constants(cc, P)
    assert recognize_rational(B1, 10 ** 4, Fraction(1, 10 ** 40)) == Fraction(-2, 5)
    with ctx(P):
        target = 3 * gmpy2.sqrt(gmpy2.mpfr(35)) / 5
        assert float(abs(C1 - target)) < 1e-40


def test_companion_constants_sporadic():
    # (x, y, A', B', C') = (47/441, 1/47^2, 2835, 172, 402 sqrt 5) for (7,2,-8)
    from piseries.cmpoints import find_cm_pair
    case = sporadic_case(7, 2, -8)
    Q1, Q2 = find_cm_pair(case, -240, Fraction(47, 441), Fraction(1, 47 ** 2))
    cc = case_at_cm(case, Q1, Q2, P)
    _, _, B2, C2 = theorem_constants(cc, P)
    assert recognize_rational(B2, 10 ** 6, Fraction(1, 10 ** 35)) == Fraction(172, 2835)
    with ctx(P):
        target = 402 * gmpy2.sqrt(gmpy2.mpfr(5)) / 2835
        assert float(abs(C2 - target)) < 1e-35


def test_hyper_remark_constants():
    # a=1/2 footnote row: tau1 = (1+i)/2, tau2 = i give the -16,-64 row
    case = hyper_case("1/2")
    cc = case_at_cm(case, QuadForm(4, -4, 2), QuadForm(4, 0, 4), P)
    B1, C1, _, _ = theorem_constants(cc, P)
    assert recognize_rational(B1, 10 ** 4, Fraction(1, 10 ** 35)) == Fraction(1, 6)
    with ctx(P):
        target = 2 * gmpy2.sqrt(8 + 6 * gmpy2.sqrt(gmpy2.mpfr(2))) / 6
        assert float(abs(C1 - target)) < 1e-35


def test_field_mismatch_rejected():
    case = sporadic_case(7, 2, -8)
    with pytest.raises(ValueError):
        case_at_cm(case, QuadForm(6, 6, 19), QuadForm(6, 0, 4), P)


def test_slash_derivative_formula_consistency():
    # theta_q(g|_2 alpha) via the chain rule vs finite differences, off-CM
    case = sporadic_case(10, 3, 9)
    alpha = (-6, -10, 12, 6)   # embeds sqrt(-204); any fixed matrix works
    tau = QuadNum(-204, Fraction(-1, 4), Fraction(1, 24))
    Pw = 288
    val = theta_q_slash2(case, alpha, tau, Pw)

    def slash(tau_n):
        a, b, c, d = alpha
        with ctx(Pw):
            at = (a * tau_n + b) / (c * tau_n + d)
            _, g_a, _ = case_tgg(case, at, Pw)
            return mat_det(alpha) / (c * tau_n + d) ** 2 * g_a

    with ctx(Pw):
        eps = gmpy2.exp2(-96)
        tau_n = tau.to_mpc(Pw)
        fd = (slash(tau_n + eps) - slash(tau_n - eps)) / (2 * eps)
        fd /= 2j * gmpy2.const_pi()
        assert float(abs(fd - val)) < 1e-40
