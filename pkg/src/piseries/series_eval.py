"""Convergent evaluation of the weighted double series

    sum_n u_n sum_m C(s n, 2m) C(2m, m) (A n + B | A m + B) x^n y^m

at arbitrary precision, with a certified geometric tail bound.

The inner m-sum is T_{sn}(1, y) (and its y-derivative for m-weights),
where T_N(b, c) is the coefficient of z^N in (z^2 + b z + c)^N.  It is
evaluated by the stable three-term recurrence

    N T_N = (2N - 1) b T_{N-1} - (N - 1)(b^2 - 4c) T_{N-2},

never by direct summation: for negative y the direct sum cancels
catastrophically while the recurrence stays benign (both fundamental
solutions have equal modulus there).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import gmpy2

from .bigfloat import ctx, to_mpfr, to_mpc
from .cases import SeriesCase


class SlowConvergence(Exception):
    """Raised when max_terms is hit before the tail bound is met."""


def u_term_iter(case: SeriesCase, P: int):
    """Yields u_0, u_1, ...; exact integers for sporadic cases, mpfr
    values from the product recurrence for hypergeometric ones."""
    if case.is_sporadic:
        a, b, c = int(case.a), int(case.b), int(case.c)
        u_prev, u = 0, 1
        n = 0
        while True:
            yield u
            u_prev, u = u, ((a * n * n + a * n + b) * u - c * n * n * u_prev)
            num, den = u, (n + 1) ** 2
            assert num % den == 0
            u = num // den
            n += 1
    else:
        a = case.hyper_a
        with ctx(P):
            u = gmpy2.mpfr(1)
            n = 0
            an = to_mpfr(a, P)
            while True:
                yield u
                u = u * (an + n) * (1 - an + n) / (n + 1) ** 2
                n += 1


def hyper_u_stream_step(a, P: int):
    """(a)_n (1-a)_n / (n!)^2 as mpfr values, for any rational a."""
    with ctx(P):
        u = gmpy2.mpfr(1)
        an = to_mpfr(Fraction(a), P)
        n = 0
        while True:
            yield u
            u = u * (an + n) * (1 - an + n) / (n + 1) ** 2
            n += 1


class InnerT:
    """T_N(1, y) and y * d/dy T_N(1, y) by joint recurrence."""

    def __init__(self, y, P: int):
        self.P = P
        with ctx(P):
            self.y = y if isinstance(y, (gmpy2.mpfr, gmpy2.mpc)) else to_mpc(y, P)
            self.w = 1 - 4 * self.y          # b^2 - 4c for (b, c) = (1, y)
            self.vals = [(gmpy2.mpfr(1), gmpy2.mpfr(0)),
                         (gmpy2.mpfr(1), gmpy2.mpfr(0))]  # (T_N, T'_N)

    def get(self, N: int):
        """(T_N, y*T'_N)."""
        with ctx(self.P):
            while len(self.vals) <= N:
                k = len(self.vals)
                t1, d1 = self.vals[k - 1]
                t2, d2 = self.vals[k - 2]
                t = ((2 * k - 1) * t1 - (k - 1) * self.w * t2) / k
                d = ((2 * k - 1) * d1 - (k - 1) * self.w * d2 + 4 * (k - 1) * t2) / k
                self.vals.append((t, d))
            t, d = self.vals[N]
            return t, self.y * d


def inner_t_exact(N: int, y: Fraction, weight_m: bool = False) -> Fraction:
    """Oracle: sum_m C(N,2m) C(2m,m) (m if weight_m else 1) y^m, exact."""
    acc = Fraction(0)
    for m in range(N // 2 + 1):
        c = comb(N, 2 * m) * comb(2 * m, m)
        acc += c * (m if weight_m else 1) * y ** m
    return acc


def inner_growth_rate(y) -> float:
    """Sharp bound rho with |T_N(1, y)| <= rho^N.

    For y >= 0 every term is positive and C(2m,m) <= 4^m gives
    (1 + 2 sqrt(y))^N; for real y < 0, T_N(1,y) = (1-4y)^(N/2) P_N(u)
    with |u| < 1 and |P_N| <= 1, so sqrt(1-4y)^N.  Complex y falls back
    to the crude positive-y bound on |y|."""
    yf = complex(y)
    if yf.imag == 0 and yf.real < 0:
        return float((1 - 4 * yf.real) ** 0.5)
    return float(1 + 2 * abs(yf) ** 0.5)


def eval_weighted_series(u_iter, x, y, P: int, *, weight=(0, 1), kind="n",
                         step=1, max_terms=100_000, growth=1.0,
                         name="series"):
    """Partial sum with a certified analytic tail bound.

    weight = (A, B) applies as (A n + B) for kind="n" or (A m + B) for
    kind="m"; step=s means the inner sum runs over C(s n, 2m); growth
    is an upper bound on limsup |u_n|^(1/n).

    The tail after term n uses a majorant: |u_k| <= 2 S g^k with
    S = max_{k<=n} |u_k|/g^k (the u-envelope decreases eventually in
    every family here), |inner_k| <= W_k rho^(s k), hence

      sum_{k>n} |term_k| <= 2 S [ (a(n+1)+b)/(1-q) + a q/(1-q)^2 ] q^(n+1)

    with q = |x| g rho^s and (a, b) a linear bound on the weight.
    Summation stops once this drops below 2^-(P-16) max(1, |sum|);
    raises SlowConvergence if q >= 1 or max_terms is exhausted.
    """
    A, B = weight
    work = P + 24
    with ctx(work):
        x = x if isinstance(x, (gmpy2.mpfr, gmpy2.mpc)) else to_mpc(x, work)
        inner = InnerT(y, work)
        yv = inner.y
        if yv.imag == 0 and yv.real < 0:
            rho = gmpy2.sqrt(1 - 4 * yv.real)
            if kind == "m":
                rho = max(rho, 1 + 2 * gmpy2.sqrt(abs(yv)))
        else:
            rho = 1 + 2 * gmpy2.sqrt(abs(yv))
        g_up = gmpy2.mpfr(growth) * (1 + gmpy2.exp2(-40))
        q = abs(x) * g_up * rho ** step
        if x != 0 and not q < 1:
            raise SlowConvergence(
                f"{name}: certified term ratio {float(q):.6f} >= 1; "
                "the series is not absolutely summable")
        a_w = abs(A) if kind == "n" else abs(A) * step / 2
        b_w = abs(B)
        total = gmpy2.mpc(0)
        xn = gmpy2.mpc(1)
        gn = gmpy2.mpfr(1)          # g_up^n
        S = gmpy2.mpfr(0)           # sup |u_k| / g_up^k so far
        threshold = gmpy2.exp2(-(P - 16))
        n = 0
        tail = None
        for u in u_iter:
            t_val, ty_val = inner.get(step * n)
            w_val = (A * n + B) * t_val if kind == "n" else B * t_val + A * ty_val
            total += u * xn * w_val
            uu = gmpy2.mpfr(u) if isinstance(u, int) else abs(u)
            S = max(S, abs(uu) / gn)
            if x == 0:
                tail = gmpy2.mpfr(0)
                break
            if n >= 4:
                qn1 = q ** (n + 1)
                tail = 2 * S * qn1 * ((a_w * (n + 1) + b_w) / (1 - q)
                                      + a_w * q / (1 - q) ** 2)
                if tail < threshold * max(gmpy2.mpfr(1), abs(total)):
                    break
            n += 1
            gn *= g_up
            xn *= x
            if n >= max_terms:
                raise SlowConvergence(
                    f"{name}: tail bound not met within {max_terms} terms")
    with ctx(P):
        return (gmpy2.mpc(total), n + 1,
                to_mpfr(0, P) if tail is None else gmpy2.mpfr(tail))


def double_series_F(case: SeriesCase, x, y, P: int, max_terms=100_000):
    """sum_n u_n sum_m C(n,2m) C(2m,m) x^n y^m (the unweighted F)."""
    return eval_weighted_series(u_term_iter(case, P + 24), x, y, P,
                                weight=(0, 1), kind="n",
                                growth=case.growth_bound(),
                                name=f"F[{case.label}]",
                                max_terms=max_terms)


def classical_ramanujan_value(P: int):
    """sum (1/2)_n^3 / (n!)^3 (6n+1) / 4^n, the one-variable sanity target 4/pi."""
    with ctx(P + 16):
        total = gmpy2.mpfr(0)
        u = gmpy2.mpfr(1)
        n = 0
        while True:
            term = u * (6 * n + 1)
            total += term
            if term < gmpy2.exp2(-(P + 8)) * total:
                break
            u = u * gmpy2.mpfr(2 * n + 1) ** 3 / (32 * (n + 1) ** 3)
            n += 1
    with ctx(P):
        return gmpy2.mpfr(total)
