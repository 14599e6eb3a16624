"""Exact integer/rational combinatorics: the three-term recurrence
sequences, their binomial-sum closed forms, T_n(b, c), and Legendre
polynomials.  No floating point anywhere in this module.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial

from .cases import SeriesCase

_cache_lock = threading.Lock()
_seq_cache: dict[tuple, list[Fraction]] = {}


def apery_seq(case: SeriesCase, N: int) -> list[Fraction]:
    """u_0 .. u_N from (n+1)^2 u_{n+1} = (a n^2 + a n + b) u_n - c n^2 u_{n-1}.

    Hypergeometric cases use the equivalent product recurrence
    u_{n+1} = u_n (a+n)(1-a+n)/(n+1)^2, which avoids factorial blowup.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    key = (case.label, )
    with _cache_lock:
        seq = _seq_cache.setdefault(key, [Fraction(1)])
        if len(seq) > N:
            return seq[: N + 1]
        seq = list(seq)
    if case.kind == "hyper":
        a = case.hyper_a
        while len(seq) <= N:
            n = len(seq) - 1
            seq.append(seq[-1] * (a + n) * (1 - a + n) / (n + 1) ** 2)
    else:
        a, b, c = case.abc
        while len(seq) <= N:
            n = len(seq) - 1
            prev = seq[n - 1] if n >= 1 else Fraction(0)
            seq.append(((a * n * n + a * n + b) * seq[n] - c * n * n * prev)
                       / (n + 1) ** 2)
    with _cache_lock:
        if len(seq) > len(_seq_cache[key]):
            _seq_cache[key] = seq
    return seq[: N + 1]


def apery_closed(case: SeriesCase, n: int) -> int:
    """Binomial-sum value of u_n for a sporadic case (one formula per row)."""
    if case.kind != "sporadic":
        raise ValueError("closed binomial forms exist only for sporadic cases")
    if n < 0:
        raise ValueError("n must be >= 0")
    abc = (int(case.a), int(case.b), int(case.c))
    if abc == (7, 2, -8):
        return sum(comb(n, k) ** 3 for k in range(n + 1))
    if abc == (10, 3, 9):
        return sum(comb(n, k) ** 2 * comb(2 * k, k) for k in range(n + 1))
    if abc == (-17, -6, 72):
        return sum(
            (-8) ** (n - k) * comb(n, k)
            * sum(comb(k, j) ** 3 for j in range(k + 1))
            for k in range(n + 1)
        )
    if abc == (12, 4, 32):
        return sum(comb(n, k) * comb(2 * k, k) * comb(2 * (n - k), n - k)
                   for k in range(n + 1))
    if abc == (-9, -3, 27):
        return sum(
            (-3) ** (n - 3 * k) * comb(n, 3 * k)
            * factorial(3 * k) // factorial(k) ** 3
            for k in range(n // 3 + 1)
        )
    if abc == (11, 3, -1):
        return sum(comb(n, k) ** 2 * comb(n + k, n) for k in range(n + 1))
    raise AssertionError(f"unregistered sporadic triple {abc}")


def double_coeff(n: int, m: int) -> int:
    """C(n, 2m) * C(2m, m), the inner-sum weight of every double series."""
    if not 0 <= 2 * m <= n:
        raise ValueError(f"need 0 <= m <= n/2, got n={n}, m={m}")
    return comb(n, 2 * m) * comb(2 * m, m)


def tn(n: int, b, c) -> Fraction:
    """Coefficient of x^n in (x^2 + b x + c)^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b, c = Fraction(b), Fraction(c)
    return sum(
        (comb(n, 2 * m) * comb(2 * m, m)) * b ** (n - 2 * m) * c ** m
        for m in range(n // 2 + 1)
    )


def legendre(n: int, x) -> Fraction:
    """P_n(x) = sum_m C(n,m)^2 ((x-1)/2)^m ((x+1)/2)^(n-m).

    The squared binomial is forced by P_n = T_n(x, (x^2-1)/4); see the
    decisions notes for the flagged one-character discrepancy upstream.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Fraction(x)
    u, v = (x - 1) / 2, (x + 1) / 2
    return sum(comb(n, m) ** 2 * u ** m * v ** (n - m) for m in range(n + 1))


def hyper_u(a, N: int) -> list[Fraction]:
    """(a)_n (1-a)_n / (n!)^2 for n = 0..N, for any rational a."""
    a = Fraction(a)
    seq = [Fraction(1)]
    for n in range(N):
        seq.append(seq[-1] * (a + n) * (1 - a + n) / (n + 1) ** 2)
    return seq
