"""CM-point analytic constants: the weight-2 slash derivative without
numerical differentiation, the one-variable 1/pi lemma residual, the
delta invariants, the closed-form theta-partials of the coordinate
change, and the (B1, C1, B2, C2) constants of the two-variable series.

Everything is evaluated from q-products and Lambert sums at explicit
precision; tau and alpha*tau are handled exactly in Q(sqrt(d)) before
embedding.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .bigfloat import ctx, to_mpc, GUARD, agree_bits
from .cases import SeriesCase
from .cmpoints import QuadForm, tau_alpha, fundamental_decomp
from .modular import case_tgg, case_f_value, case_f2_value
from .quadfield import Mat, QuadNum, mat_det, mobius


def _imag_tau(Q: QuadForm, P: int):
    with ctx(P):
        return gmpy2.sqrt(gmpy2.mpfr(-Q.disc)) / (2 * Q.A)


def theta_q_slash2(case: SeriesCase, alpha: Mat, tau: QuadNum, P: int):
    """theta_q of (g|_2 alpha) at tau, by the exact chain rule:

        (det a)^2 (c tau+d)^-4 (theta_q g)(a tau)
            - (c det a / (pi i)) (c tau+d)^-3 g(a tau),

    with a tau computed exactly in Q(sqrt(d)) before embedding."""
    a, b, c, d = alpha
    det = mat_det(alpha)
    atau = mobius(alpha, tau)
    _, g_a, tg_a = case_tgg(case, atau, P + GUARD)
    W = P + GUARD
    with ctx(W):
        tau_n = tau.to_mpc(W)
        cd = c * tau_n + d
        pi_i = gmpy2.mpc(0, gmpy2.const_pi())
        return det ** 2 / cd ** 4 * tg_a - (c * det / pi_i) / cd ** 3 * g_a


def h_and_theta_q_h(case: SeriesCase, alpha: Mat, tau: QuadNum, P: int):
    """h = (g|_2 alpha)/g and theta_q h at tau."""
    a, b, c, d = alpha
    det = mat_det(alpha)
    atau = mobius(alpha, tau)
    W = P + GUARD
    _, g, tg = case_tgg(case, tau, W)
    _, g_a, _ = case_tgg(case, atau, W)
    tslash = theta_q_slash2(case, alpha, tau, W)
    with ctx(W):
        tau_n = tau.to_mpc(W)
        cd = c * tau_n + d
        h = det / cd ** 2 * g_a / g
        th = (tslash - h * tg) / g
    with ctx(P):
        return gmpy2.mpc(h), gmpy2.mpc(th)


def lemma_pi_residual(case: SeriesCase, Q: QuadForm, P: int):
    """| (theta_q g / theta_q t)(tau_d) - (theta_q h)(tau_d)/2
         - 1/(2 pi Im tau_d) |.

    Since g = theta_q t, the first ratio is theta_q g / g."""
    tau, alpha = tau_alpha(Q)
    W = P + GUARD
    _, g, tg = case_tgg(case, tau, W)
    if g == 0:
        raise ZeroDivisionError(f"g vanishes at {Q}")
    _, th = h_and_theta_q_h(case, alpha, tau, W)
    with ctx(W):
        rhs = 1 / (2 * gmpy2.const_pi() * _imag_tau(Q, W))
        res = abs(tg / g - th / 2 - rhs)
    with ctx(P):
        return gmpy2.mpfr(res)


def h_at_cm(case: SeriesCase, Q: QuadForm, P: int):
    """h(tau_d); equals -1 at every CM point."""
    tau, alpha = tau_alpha(Q)
    h, _ = h_and_theta_q_h(case, alpha, tau, P)
    return h


def delta(case: SeriesCase, Q: QuadForm, P: int, _escalated=False):
    """delta = (theta_q h)/f^2 at the CM point of Q, with a two-precision
    escalation guard."""
    tau, alpha = tau_alpha(Q)
    W = P + GUARD

    def compute(prec):
        _, th = h_and_theta_q_h(case, alpha, tau, prec)
        f2 = case_f2_value(case, tau, prec)
        with ctx(prec):
            return th / f2

    v1 = compute(W)
    v2 = compute(W + 48)
    if agree_bits(v1, v2) < P - 24 and not _escalated:
        return delta(case, Q, 2 * P, _escalated=True)
    with ctx(P):
        return gmpy2.mpc(v2)


def theta_partials(case: SeriesCase, X, Y):
    """Closed forms of (theta_x X, theta_x Y, theta_y X, theta_y Y) for
    the sporadic coordinate change; caller supplies the precision
    context.  X != Y is required for the theta_y pair."""
    a, c = int(case.a), int(case.c)
    den = (1 - a * (X + Y) + c * (X * X + 4 * X * Y + Y * Y)
           - a * c * X * Y * (X + Y) + c * c * X * X * Y * Y)
    qx = 1 - a * X + c * X * X
    qy = 1 - a * Y + c * Y * Y
    txX = X * (1 - c * Y * Y) * qx / den
    txY = Y * (1 - c * X * X) * qy / den
    if X == Y:
        raise ZeroDivisionError("theta_y partials have a pole at X = Y")
    pref = X * Y * qx * qy / (1 - c * X * Y) ** 2
    tyX = (pref / (Y - X)
           * (1 - 2 * a * X + 3 * c * X * X + c * X * Y * (3 - 2 * a * X + c * X * X))
           / den)
    tyY = (pref / (X - Y)
           * (1 - 2 * a * Y + 3 * c * Y * Y + c * X * Y * (3 - 2 * a * Y + c * Y * Y))
           / den)
    return txX, txY, tyX, tyY


@dataclass
class CaseAtCM:
    case: SeriesCase
    Q1: QuadForm
    Q2: QuadForm
    t1: object
    t2: object
    eps: object
    delta1: object
    delta2: object
    im1: object
    im2: object


def case_at_cm(case: SeriesCase, Q1: QuadForm, Q2: QuadForm, P: int) -> CaseAtCM:
    """Assemble every CM-point invariant the series constants need."""
    k1 = fundamental_decomp(Q1.disc)[0]
    k2 = fundamental_decomp(Q2.disc)[0]
    if k1 != k2:
        raise ValueError(f"CM pair must lie in one field: {Q1.disc} vs {Q2.disc}")
    W = P + GUARD
    tau1, tau2 = Q1.tau(), Q2.tau()
    t1, _, _ = case_tgg(case, tau1, W)
    t2, _, _ = case_tgg(case, tau2, W)
    with ctx(W):
        eps = case_f_value(case, tau2, W) / case_f_value(case, tau1, W)
    d1 = delta(case, Q1, W)
    d2 = delta(case, Q2, W)
    return CaseAtCM(case, Q1, Q2, t1, t2, eps, d1, d2,
                    _imag_tau(Q1, W), _imag_tau(Q2, W))


def theorem_constants(cc: CaseAtCM, P: int):
    """(B1, C1, B2, C2): the series with weights (n + B1) and (m + B2)
    at (x, y) from this CM pair sum to C1/pi and C2/pi."""
    case = cc.case
    W = P + GUARD
    with ctx(W):
        t1, t2 = gmpy2.mpc(cc.t1), gmpy2.mpc(cc.t2)
        d1, d2 = gmpy2.mpc(cc.delta1), gmpy2.mpc(cc.delta2)
        eps = gmpy2.mpc(cc.eps)
        im1, im2 = gmpy2.mpfr(cc.im1), gmpy2.mpfr(cc.im2)
        if case.kind == "hyper":
            pref = (1 - t1) * (1 - t2) / (4 * (1 - t1 * t2))
            B1 = pref * (4 - d1 - d2)
            C1 = pref * (eps / im1 + 1 / (eps * im2))
            anti = 4 * (1 - t1 * t2) * (t2 - t1)
            B2 = ((2 - d1) * (1 - t1 * t1) * t2
                  - (2 - d2) * (1 - t2 * t2) * t1) / anti
            C2 = (eps / im1 * (1 - t1 * t1) * t2
                  - 1 / (eps * im2) * (1 - t2 * t2) * t1) / anti
        else:
            a, c = to_mpc(case.a, W), to_mpc(case.c, W)
            txX, txY, tyX, tyY = theta_partials(case, t1, t2)
            q1 = 1 - a * t1 + c * t1 * t1
            q2 = 1 - a * t2 + c * t2 * t2
            one_m = 1 - c * t1 * t2
            w1 = (-d1 + 2 - 4 * a * t1 + 6 * c * t1 * t1) / (4 * t1 * q1)
            w2 = (-d2 + 2 - 4 * a * t2 + 6 * c * t2 * t2) / (4 * t2 * q2)
            B1 = c * (t1 * txY + t2 * txX) / one_m + txX * w1 + txY * w2
            C1 = (eps * one_m * txX / (4 * t1 * q1 * im1)
                  + one_m * txY / (eps * 4 * t2 * q2 * im2))
            B2 = c * (t1 * tyY + t2 * tyX) / one_m + tyX * w1 + tyY * w2
            C2 = (eps * one_m * tyX / (4 * t1 * q1 * im1)
                  + one_m * tyY / (eps * 4 * t2 * q2 * im2))
    with ctx(P):
        return gmpy2.mpc(B1), gmpy2.mpc(C1), gmpy2.mpc(B2), gmpy2.mpc(C2)
