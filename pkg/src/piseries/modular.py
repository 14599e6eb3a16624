"""Numeric modular objects at explicit precision: Dedekind eta with its
exact multiplier system, the two level-5 generalized eta values, Jacobi
thetas, E2/E4, the hexagonal lattice theta, per-case (t, f, g) values,
the bimodular x, y, F, and the transformation / product-formula checks.

Evaluation strategy: values come from the defining products and lattice
sums (never from long exact q-expansions), and logarithmic q-derivatives
come from Lambert-type sums, so a point with small Im(tau) costs
O(P / Im(tau)) scalar operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log

import gmpy2

from .bigfloat import ctx, to_mpc, to_mpfr, GUARD
from .cases import SeriesCase
from .quadfield import Mat, QuadNum, mat_det
from .series_eval import (eval_weighted_series, u_term_iter,
                          hyper_u_stream_step)


def _as_tau(tau, P: int):
    if isinstance(tau, QuadNum):
        tau = tau.to_mpc(P + GUARD)
    tau = to_mpc(tau, P + GUARD)
    if not tau.imag > 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau}")
    return tau


def _nterms(tau_im, P: int) -> int:
    """Terms needed so the dropped tail of a q-product is < 2^-(P+16)."""
    return int(ceil((P + 16) * log(2) / (2 * float(gmpy2.const_pi(precision=53)) *
                                         float(tau_im)))) + 2


def _work(P: int, tau_im) -> int:
    n = _nterms(tau_im, P)
    return P + GUARD + max(8, n.bit_length())


def eta(tau, P: int):
    """eta(tau) = q^(1/24) prod (1 - q^n), truncated below 2^-(P+16)."""
    tau = _as_tau(tau, P)
    W = _work(P, tau.imag)
    with ctx(W):
        two_pi_i = 2j * gmpy2.const_pi()
        q = gmpy2.exp(two_pi_i * tau)
        nmax = _nterms(tau.imag, P)
        prod = gmpy2.mpc(1)
        qn = gmpy2.mpc(1)
        for _ in range(nmax):
            qn *= q
            prod *= 1 - qn
        value = gmpy2.exp(two_pi_i * tau / 24) * prod
    with ctx(P):
        return gmpy2.mpc(value)


def _kronecker_odd(a: int, n: int) -> int:
    """Jacobi/Kronecker symbol (a/n) for odd n (n may be negative)."""
    if n < 0:
        return (-1 if a < 0 else 1) * _kronecker_odd(a, -n)
    if n == 1:
        return 1
    return int(gmpy2.jacobi(a, n))


def eta_multiplier(a: int, b: int, c: int, d: int):
    """Exact eta multiplier: returns (k, gamma') with

        eta(gamma tau) = zeta_24^k * sqrt((c' tau + d')/i) * eta(tau)

    for c' != 0, and eta(tau + b') = zeta_24^k eta(tau) for c' = 0, where
    gamma' = (a',b',c',d') is gamma or -gamma normalized to c' > 0 (or
    c' = 0, d' > 0).  zeta_24 = exp(pi i/12).
    """
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    if c < 0 or (c == 0 and d < 0):
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        return b % 24, (a, b, c, d)
    if c % 2 == 1:
        sign = _kronecker_odd(d, c)
        k = 6 * ((1 - c) // 2) + b * d * (1 - c * c) + c * (a + d)
    else:
        sign = _kronecker_odd(c, d)
        k = a * c * (1 - d * d) + d * (b - c + 3)
    k = (k + (12 if sign < 0 else 0)) % 24
    return k, (a, b, c, d)


def zeta24(k: int, P: int):
    with ctx(P):
        return gmpy2.exp(gmpy2.mpc(0, gmpy2.const_pi() / 12) * (k % 24))


def eta_transform_defect(gamma: Mat, tau, P: int):
    """Relative size of eta(gamma tau) - eps1 sqrt((c tau+d)/i) eta(tau)."""
    k, (a, b, c, d) = eta_multiplier(*gamma)
    tau = _as_tau(tau, P)
    with ctx(P + GUARD):
        lhs = eta((a * tau + b) / (c * tau + d), P)
        base = eta(tau, P)
        if c == 0:
            rhs = zeta24(k, P) * base
        else:
            rhs = zeta24(k, P) * gmpy2.sqrt((c * tau + d) / 1j) * base
        return abs(lhs - rhs) / abs(base)


def _bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


def gen_eta(g: int, tau, P: int):
    """E_{g,0}(tau) = q^(B(g/5)/2) prod (1-q^(m-1+g/5))(1-q^(m-g/5)),
    the two level-5 generalized eta values used by the (11,3,-1) case."""
    if g not in (1, 2):
        raise ValueError("only E_{1,0} and E_{2,0} are supported")
    tau = _as_tau(tau, P)
    W = _work(P, tau.imag)
    lead = _bernoulli2(Fraction(g, 5)) / 2
    with ctx(W):
        two_pi_i = 2j * gmpy2.const_pi()
        qfifth = gmpy2.exp(two_pi_i * tau / 5)
        nmax = 5 * _nterms(tau.imag, P) + 10
        prod = gmpy2.mpc(1)
        for m in range(1, nmax // 5 + 2):
            e1 = 5 * (m - 1) + g
            e2 = 5 * m - g
            if e1 <= nmax:
                prod *= 1 - qfifth ** e1
            if e2 <= nmax:
                prod *= 1 - qfifth ** e2
        value = gmpy2.exp(two_pi_i * tau * to_mpfr(lead, W)) * prod
    with ctx(P):
        return gmpy2.mpc(value)


def theta_eisenstein(kind: str, tau, P: int):
    """kind in {theta2, theta3, theta4, E2, E4, L}."""
    tau = _as_tau(tau, P)
    W = _work(P, tau.imag)
    with ctx(W):
        q = gmpy2.exp(2j * gmpy2.const_pi() * tau)
        vmax = _nterms(tau.imag, P)
        if kind in ("theta2", "theta3", "theta4"):
            if kind == "theta2":
                # 2 q^(1/4) sum q^(n^2+n)
                total = gmpy2.mpc(0)
                n = 0
                while n * n + n <= vmax:
                    total += q ** (n * n + n)
                    n += 1
                value = 2 * gmpy2.exp(2j * gmpy2.const_pi() * tau / 4) * total
            else:
                sign = -1 if kind == "theta4" else 1
                total = gmpy2.mpc(1)
                n = 1
                while n * n <= vmax:
                    total += 2 * sign ** n * q ** (n * n)
                    n += 1
                value = total
        elif kind in ("E2", "E4"):
            w, coef = (1, -24) if kind == "E2" else (3, 240)
            total = gmpy2.mpc(0)
            qn = gmpy2.mpc(1)
            for n in range(1, vmax + 1):
                qn *= q
                total += n ** w * qn / (1 - qn)
            value = 1 + coef * total
        elif kind == "L":
            counts = [0] * (vmax + 1)
            K = int((4 * vmax / 3) ** 0.5) + 2
            for m in range(-K, K + 1):
                for n in range(-K, K + 1):
                    v = m * m + m * n + n * n
                    if v <= vmax:
                        counts[v] += 1
            total = gmpy2.mpc(counts[0])
            qn = gmpy2.mpc(1)
            for v in range(1, vmax + 1):
                qn *= q
                if counts[v]:
                    total += counts[v] * qn
            value = total
        else:
            raise KeyError(f"unknown kind {kind!r}")
    with ctx(P):
        return gmpy2.mpc(value)


def borwein_abc(tau, P: int):
    """Borwein cubic theta values (a, b, c) at tau."""
    tau = _as_tau(tau, P)
    with ctx(P + GUARD):
        tau3 = 3 * tau
        tau13 = tau / 3
    L = theta_eisenstein("L", tau, P + GUARD)
    L3 = theta_eisenstein("L", tau3, P + GUARD)
    L13 = theta_eisenstein("L", tau13, P + GUARD)
    with ctx(P):
        return gmpy2.mpc(L), (3 * L3 - L) / 2, (L13 - L) / 2


# ---------------------------------------------------------------------------
# per-case values
# ---------------------------------------------------------------------------

def _eta_quotient_value(scalar, exps: dict, tau, P: int):
    W = P + GUARD
    with ctx(W):
        value = to_mpc(Fraction(scalar), W)
        for dlt, e in sorted(exps.items()):
            value *= eta(dlt * tau, W) ** e
    with ctx(P):
        return gmpy2.mpc(value)


def _legendre5(n: int) -> int:
    return {0: 0, 1: 1, 2: -1, 3: -1, 4: 1}[n % 5]


def case_t_value(case: SeriesCase, tau, P: int):
    tau = _as_tau(tau, P)
    recipe = case.t_recipe
    if recipe[0] == "eta":
        return _eta_quotient_value(recipe[1], recipe[2], tau, P)
    # (11,3,-1): t = (E_{1,0}(5 tau)/E_{2,0}(5 tau))^5
    with ctx(P + GUARD):
        r = gen_eta(1, 5 * tau, P + GUARD) / gen_eta(2, 5 * tau, P + GUARD)
        value = r ** 5
    with ctx(P):
        return gmpy2.mpc(value)


def _sqrt_tracked(values):
    """Square roots of a discrete path of values, continuous from the
    principal branch at the first point."""
    out = [gmpy2.sqrt(values[0])]
    for v in values[1:]:
        r = gmpy2.sqrt(v)
        out.append(r if abs(r - out[-1]) <= abs(r + out[-1]) else -r)
    return out


def case_f_value(case: SeriesCase, tau, P: int):
    tau = _as_tau(tau, P)
    recipe = case.f_recipe
    if recipe[0] == "eta":
        return _eta_quotient_value(recipe[1], recipe[2], tau, P)
    if recipe[0] == "lattice":
        return theta_eisenstein("L", tau, P)
    if recipe[0] == "gen5_f":
        with ctx(P + GUARD):
            value = (eta(5 * tau, P + GUARD) ** 2
                     * gen_eta(2, 5 * tau, P + GUARD) ** 2
                     / gen_eta(1, 5 * tau, P + GUARD) ** 3)
        with ctx(P):
            return gmpy2.mpc(value)
    # a = 1/4: f = (2 E2(2 tau) - E2(tau))^(1/2); the weight-2 form has a
    # zero in H, so pick the branch by continuity down from i*infinity,
    # where the expansion starts at 1.
    with ctx(P + GUARD):
        top = max(float(tau.imag), 2.0) * 4
        steps = 12
        path = []
        for k in range(steps):
            im = top * (float(tau.imag) / top) ** (k / steps)
            path.append(gmpy2.mpc(tau.real, im))
        path.append(tau)  # the endpoint must be the exact target
        vals = [case_f2_value(case, t, P + GUARD) for t in path]
        branch = _sqrt_tracked(vals)
        value = branch[-1]
    with ctx(P):
        return gmpy2.mpc(value)


def case_f2_value(case: SeriesCase, tau, P: int):
    if case.f_recipe[0] == "sqrt_e2":
        tau = _as_tau(tau, P)
        with ctx(P + GUARD):
            value = (2 * theta_eisenstein("E2", 2 * tau, P + GUARD)
                     - theta_eisenstein("E2", tau, P + GUARD))
        with ctx(P):
            return gmpy2.mpc(value)
    f = case_f_value(case, tau, P)
    with ctx(P):
        return f * f


def case_tgg(case: SeriesCase, tau, P: int):
    """(t, g, theta_q g) at tau, with g = theta_q t.

    Uses g = t * S and theta_q g = t (S^2 + theta_q S) where S is the
    logarithmic q-derivative of t: for an eta quotient
    S = sum e_delta delta E2(delta tau)/24, and theta_q E2 = (E2^2-E4)/12.
    """
    tau = _as_tau(tau, P)
    W = P + 2 * GUARD
    with ctx(W):
        recipe = case.t_recipe
        if recipe[0] == "eta":
            S = gmpy2.mpc(0)
            Sp = gmpy2.mpc(0)
            for dlt, e in sorted(recipe[2].items()):
                e2v = theta_eisenstein("E2", dlt * tau, W)
                e4v = theta_eisenstein("E4", dlt * tau, W)
                S += Fraction(e * dlt, 24) * e2v
                Sp += Fraction(e * dlt * dlt, 288) * (e2v * e2v - e4v)
        else:
            # t = q prod (1-q^n)^(5 chi5(n)): Lambert sums
            q = gmpy2.exp(2j * gmpy2.const_pi() * tau)
            nmax = _nterms(tau.imag, P)
            S = gmpy2.mpc(1)
            Sp = gmpy2.mpc(0)
            qn = gmpy2.mpc(1)
            for n in range(1, nmax + 1):
                qn *= q
                chi = _legendre5(n)
                if chi:
                    ratio = qn / (1 - qn)
                    S -= 5 * chi * n * ratio
                    Sp -= 5 * chi * n * n * ratio / (1 - qn)
        t = case_t_value(case, tau, W)
        g = t * S
        tg = t * (S * S + Sp)
    with ctx(P):
        return gmpy2.mpc(t), gmpy2.mpc(g), gmpy2.mpc(tg)


def xy_from_t(case: SeriesCase, t1, t2):
    """The bimodular (x, y) as functions of (t1, t2); caller provides
    the working precision via an enclosing context."""
    if case.is_sporadic:
        a, c = to_mpc(case.a, 300), to_mpc(case.c, 300)
        a, c = gmpy2.mpc(a), gmpy2.mpc(c)
        nx = (t1 + t2) * (1 + c * t1 * t2) - 2 * a * t1 * t2
        x = nx / (1 - c * t1 * t2) ** 2
        y = (t1 * t2 * (1 - a * t1 + c * t1 * t1) * (1 - a * t2 + c * t2 * t2)
             / nx ** 2)
        return x, y
    x = -(t1 + t2) / ((1 - t1) * (1 - t2))
    y = t1 * t2 / (t1 + t2) ** 2
    return x, y


@dataclass
class BimodularValues:
    t1: object
    t2: object
    f1: object
    f2: object
    x: object
    y: object
    F: object


def bimodular_xyF(case: SeriesCase, tau1, tau2, P: int) -> BimodularValues:
    """Numeric (t1, t2, x, y, F) at a pair of upper half-plane points."""
    W = P + GUARD
    with ctx(W):
        t1 = case_t_value(case, tau1, W)
        t2 = case_t_value(case, tau2, W)
        f1 = case_f_value(case, tau1, W)
        f2 = case_f_value(case, tau2, W)
        x, y = xy_from_t(case, t1, t2)
        if case.is_sporadic:
            F = (1 - to_mpc(case.c, W) * t1 * t2) * f1 * f2
        else:
            F = f1 * f2
    with ctx(P):
        return BimodularValues(gmpy2.mpc(t1), gmpy2.mpc(t2), gmpy2.mpc(f1),
                               gmpy2.mpc(f2), gmpy2.mpc(x), gmpy2.mpc(y),
                               gmpy2.mpc(F))


def double_series_residual(case: SeriesCase, tau1, tau2, P: int,
                           max_terms=100_000):
    """|F(tau1,tau2) - sum u_n sum_m C(n,2m)C(2m,m) x^n y^m| (absolute),
    for points where the series converges; raises on a divergent pair."""
    vals = bimodular_xyF(case, tau1, tau2, P + GUARD)
    series, _, _ = eval_weighted_series(
        u_term_iter(case, P + 24), vals.x, vals.y, P,
        weight=(0, 1), kind="n", max_terms=max_terms,
        growth=case.growth_bound(), name=f"F[{case.label}]")
    with ctx(P):
        return abs(series - vals.F)


def mobius_mpc(m: Mat, tau):
    a, b, c, d = m
    return (a * tau + b) / (c * tau + d)


def check_transform(case: SeriesCase, tag: str, tau1, tau2, P: int):
    """Residual of F|gamma = chi2(gamma) F for a listed normalizer.

    Returns (relative_residual, chi2).  F|gamma is
    det(gamma)/((c tau1 + d)(c tau2 + d)) * F(gamma tau1, gamma tau2).
    """
    if tag not in case.normalizers:
        raise KeyError(f"case {case.label} has no normalizer {tag!r}")
    mat, chi = case.normalizers[tag]
    if case.f_recipe[0] == "sqrt_e2":
        # only F^2 transforms with a well-defined sign for a = 1/4
        return check_transform_squared(case, tag, tau1, tau2, P)
    W = P + GUARD
    tau1 = _as_tau(tau1, P)
    tau2 = _as_tau(tau2, P)
    with ctx(W):
        a, b, c, d = mat
        base = bimodular_xyF(case, tau1, tau2, W).F
        moved = bimodular_xyF(case, mobius_mpc(mat, tau1),
                              mobius_mpc(mat, tau2), W).F
        slashed = mat_det(mat) / ((c * tau1 + d) * (c * tau2 + d)) * moved
        res = abs(slashed - chi * base) / abs(base)
    with ctx(P):
        return gmpy2.mpfr(res), chi


def check_transform_squared(case: SeriesCase, tag: str, tau1, tau2, P: int):
    mat, chi = case.normalizers[tag]
    W = P + GUARD
    tau1 = _as_tau(tau1, P)
    tau2 = _as_tau(tau2, P)
    with ctx(W):
        a, b, c, d = mat
        f2 = lambda t: case_f2_value(case, t, W)
        base = f2(tau1) * f2(tau2)
        moved = f2(mobius_mpc(mat, tau1)) * f2(mobius_mpc(mat, tau2))
        factor = (mat_det(mat) / ((c * tau1 + d) * (c * tau2 + d))) ** 2
        res = abs(factor * moved - chi * base) / abs(base)
    with ctx(P):
        return gmpy2.mpfr(res), chi


def t_involution_defect(case: SeriesCase, which: str, tau, P: int):
    """Check the hauptmodul involution laws at one point.

    which = "sigma1": t(sigma1 tau) * c * t(tau) = 1   (or 1/t for hyper)
    which = "sigma2": t(sigma2 tau) = (1-alpha t)/(alpha (1-beta t))
    """
    tau = _as_tau(tau, P)
    W = P + GUARD
    with ctx(W):
        t = case_t_value(case, tau, W)
        if case.kind == "hyper":
            mat, _ = next(iter(case.normalizers.values()))
            tw = case_t_value(case, mobius_mpc(mat, tau), W)
            return abs(tw * t - 1)
        if which == "sigma1":
            mat, _ = case.normalizers[case.sigma1]
            tw = case_t_value(case, mobius_mpc(mat, tau), W)
            return abs(tw * to_mpc(case.c, W) * t - 1)
        mat, _ = case.normalizers[case.sigma2]
        tw = case_t_value(case, mobius_mpc(mat, tau), W)
        al = (case.alpha.to_mpc(W) if isinstance(case.alpha, QuadNum)
              else to_mpc(case.alpha, W))
        be = (case.beta.to_mpc(W) if isinstance(case.beta, QuadNum)
              else to_mpc(case.beta, W))
        return abs(tw - (1 - al * t) / (al * (1 - be * t)))


# ---------------------------------------------------------------------------
# section-3 product identities (T_{2n}, Rogers-Straub, T_{3n})
# ---------------------------------------------------------------------------

def _t_theta_ratio(tau, P: int):
    """t = theta4^2/theta3^2 = eta(tau)^8 eta(4tau)^4 / eta(2tau)^12."""
    return _eta_quotient_value(1, {1: 8, 4: 4, 2: -12}, _as_tau(tau, P), P)


def section3_identity(kind: str, tau1, tau2, P: int, max_terms=100_000):
    """|double series - closed bimodular form| for the T2n / RS / T3n
    identities; absolute residual as mpfr."""
    W = P + GUARD
    tau1 = _as_tau(tau1, P)
    tau2 = _as_tau(tau2, P)
    with ctx(W):
        if kind in ("t2n", "rs"):
            t1, t2 = _t_theta_ratio(tau1, W), _t_theta_ratio(tau2, W)
            th1 = theta_eisenstein("theta3", tau1, W) ** 2
            th2 = theta_eisenstein("theta3", tau2, W) ** 2
            closed = (1 + t1 * t2) / 2 * th1 * th2
            if kind == "t2n":
                x = (t1 + t2) ** 2 * (1 - t1 * t2) ** 2 / (1 + t1 * t2) ** 4
                y = (t1 * t2 * (1 - t1 ** 2) * (1 - t2 ** 2)
                     / ((t1 + t2) ** 2 * (1 - t1 * t2) ** 2))
                series, _, _ = eval_weighted_series(
                    hyper_u_stream_step(Fraction(1, 2), W), x, y, W,
                    weight=(0, 1), kind="n", step=2, max_terms=max_terms,
                    name="T2n")
            else:
                if abs(t1 - t2) == 0:
                    raise ValueError("Rogers-Straub pair needs t1 != t2")
                x = (t1 * t2 * (1 - t1 ** 2) * (1 - t2 ** 2)
                     / ((t1 - t2) ** 2 * (1 + t1 * t2) ** 2))
                y = ((t1 - t2) ** 4
                     / (16 * t1 * t2 * (1 - t1 ** 2) * (1 - t2 ** 2)))
                series = _rs_series(x, y, W, max_terms)
        elif kind == "t3n":
            a1, b1, _ = borwein_abc(tau1, W)
            a2, b2, _ = borwein_abc(tau2, W)
            t1, t2 = b1 / a1, b2 / a2
            w = 1 + 4 * t1 * t2 * (t1 + t2)
            # branch continuous with value 1 at the cusp
            closed = gmpy2.sqrt(w) / 3 * a1 * a2
            nx = t1 + t2 - 2 * (t1 * t2) ** 2
            x = (nx / w) ** 3
            y = t1 * t2 * (1 - t1 ** 3) * (1 - t2 ** 3) / nx ** 2
            series, _, _ = eval_weighted_series(
                hyper_u_stream_step(Fraction(1, 3), W), x, y, W,
                weight=(0, 1), kind="n", step=3, max_terms=max_terms,
                name="T3n")
        else:
            raise KeyError(f"unknown section-3 identity {kind!r}")
        res = abs(series - closed)
    with ctx(P):
        return gmpy2.mpfr(res)


def _rs_series(x, y, P: int, max_terms: int):
    """sum_n C(2n,n) sum_m C(n,m)^2 C(2m,n) x^n y^m, direct inner sums."""
    from math import comb
    with ctx(P):
        total = gmpy2.mpc(0)
        xn = gmpy2.mpc(1)
        cb = 1
        n = 0
        while True:
            ym = gmpy2.mpc(1) * y ** ((n + 1) // 2)
            inner = gmpy2.mpc(0)
            for m in range((n + 1) // 2, n + 1):
                inner += comb(n, m) ** 2 * comb(2 * m, n) * ym
                ym *= y
            term = cb * xn * inner
            total += term
            if n > 8 and abs(term) < abs(total) * gmpy2.exp2(-(P - 8)):
                break
            cb = cb * 2 * (2 * n + 1) // (n + 1)
            xn *= x
            n += 1
            if n >= max_terms:
                raise ValueError("Rogers-Straub series did not converge")
        return total
