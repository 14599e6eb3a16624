"""Exact q-expansions: q^lead * (c_0 + c_1 q + ... + c_M q^M) with
rational lead and rational coefficients.

These back the per-case hauptmodul t, weight-1 form f, and g = theta_q t,
plus the classical building blocks (Euler product, Jacobi thetas, E2, E4,
the hexagonal-lattice theta).  Construction is cached per (case, M);
everything here is exact, numerics live in `modular`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cases import SeriesCase


@dataclass(frozen=True)
class QSeries:
    lead: Fraction
    coeffs: tuple  # Fractions c_0..c_M

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k <= self.M else Fraction(0)

    def coefficient(self, exponent) -> Fraction:
        """Coefficient of q^exponent (exponent need not be integral)."""
        k = Fraction(exponent) - self.lead
        if k.denominator != 1 or k < 0 or k > self.M:
            return Fraction(0)
        return self.coeffs[int(k)]

    def _strip(self) -> "QSeries":
        c = self.coeffs
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if k == 0:
            return self
        if k == len(c):  # identically zero through the truncation
            return QSeries(self.lead, c)
        return QSeries(self.lead + k, c[k:])

    def truncate(self, M: int) -> "QSeries":
        return QSeries(self.lead, self.coeffs[: M + 1])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.lead, tuple(c * other for c in self.coeffs))
        M = min(self.M, other.M)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (M + 1)
        for i in range(min(len(a), M + 1)):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b), M + 1 - i)):
                if b[j]:
                    out[i + j] += ai * b[j]
        return QSeries(self.lead + other.lead, tuple(out))

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries(Fraction(0), (Fraction(other),) + (Fraction(0),) * self.M)
        d = other.lead - self.lead
        if d < 0:
            return other + self
        if d.denominator != 1:
            raise ValueError("cannot add series with incompatible leads")
        d = int(d)
        M = min(self.M, other.M + d)
        out = [self[k] + other[k - d] for k in range(M + 1)]
        return QSeries(self.lead, tuple(out))

    def __neg__(self):
        return QSeries(self.lead, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, QSeries) else QSeries(
            Fraction(0), (Fraction(-other),) + (Fraction(0),) * self.M))

    def invert(self) -> "QSeries":
        s = self._strip()
        if not s.coeffs or s.coeffs[0] == 0:
            raise ZeroDivisionError("series is zero through its truncation")
        c0 = s.coeffs[0]
        M = s.M
        inv = [1 / c0] + [Fraction(0)] * M
        for k in range(1, M + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                if s[j]:
                    acc += s[j] * inv[k - j]
            inv[k] = -acc / c0
        return QSeries(-s.lead, tuple(inv))

    def pow(self, e: int) -> "QSeries":
        if e < 0:
            return self.invert().pow(-e)
        result = QSeries(Fraction(0), (Fraction(1),) + (Fraction(0),) * self.M)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def theta_q(self) -> "QSeries":
        """q d/dq, termwise: (lead+k) c_k."""
        return QSeries(self.lead,
                       tuple((self.lead + k) * c for k, c in enumerate(self.coeffs)))

    def sqrt(self) -> "QSeries":
        """Formal square root with value 1 at the leading term."""
        s = self._strip()
        if s.coeffs[0] != 1:
            raise ValueError("sqrt needs leading coefficient 1")
        M = s.M
        r = [Fraction(1)] + [Fraction(0)] * M
        for k in range(1, M + 1):
            acc = s[k]
            for j in range(1, k):
                acc -= r[j] * r[k - j]
            r[k] = acc / 2
        return QSeries(s.lead / 2, tuple(r))

    def agrees_with(self, other, through: int) -> bool:
        d = (self - other)
        return all(d[k] == 0 for k in range(min(through + 1, d.M + 1)))


def zero(M: int) -> QSeries:
    return QSeries(Fraction(0), (Fraction(0),) * (M + 1))


def one(M: int) -> QSeries:
    return QSeries(Fraction(0), (Fraction(1),) + (Fraction(0),) * M)


def monomial(exponent, M: int) -> QSeries:
    return QSeries(Fraction(exponent), (Fraction(1),) + (Fraction(0),) * M)


def euler_product(M: int, step: int = 1) -> QSeries:
    """prod_{n>=1} (1 - q^(step*n)) by the pentagonal-number theorem."""
    out = [Fraction(0)] * (M + 1)
    out[0] = Fraction(1)
    k = 1
    while True:
        g1 = step * k * (3 * k - 1) // 2
        g2 = step * k * (3 * k + 1) // 2
        if g1 > M and g2 > M:
            break
        sign = -1 if k % 2 else 1
        if g1 <= M:
            out[g1] += sign
        if g2 <= M:
            out[g2] += sign
        k += 1
    return QSeries(Fraction(0), tuple(out))


def eta_quotient(scalar, exps: dict, M: int) -> QSeries:
    """scalar * prod_delta eta(delta tau)^(e_delta) as an exact series."""
    lead = sum(Fraction(d) * e for d, e in exps.items()) / 24
    s = one(M) * Fraction(scalar)
    for d, e in sorted(exps.items()):
        s = s * euler_product(M, step=d).pow(e)
    return QSeries(lead + s.lead, s.coeffs)


def product_factors(M: int, factor_exp) -> QSeries:
    """prod_{n=1..M} (1 - q^n)^(factor_exp(n)) for integer exponents."""
    s = one(M)
    for n in range(1, M + 1):
        e = factor_exp(n)
        if not e:
            continue
        base = [Fraction(0)] * (M + 1)
        base[0] = Fraction(1)
        if n <= M:
            base[n] = Fraction(-1)
        s = s * QSeries(Fraction(0), tuple(base)).pow(e)
    return s


def theta2(M: int) -> QSeries:
    out = [Fraction(0)] * (M + 1)
    n = 0
    while n * n + n <= M:
        out[n * n + n] += 2
        n += 1
    return QSeries(Fraction(1, 4), tuple(out))


def theta3(M: int) -> QSeries:
    out = [Fraction(0)] * (M + 1)
    out[0] = Fraction(1)
    n = 1
    while n * n <= M:
        out[n * n] += 2
        n += 1
    return QSeries(Fraction(0), tuple(out))


def theta4(M: int) -> QSeries:
    out = [Fraction(0)] * (M + 1)
    out[0] = Fraction(1)
    n = 1
    while n * n <= M:
        out[n * n] += 2 * (-1) ** n
        n += 1
    return QSeries(Fraction(0), tuple(out))


def _divisor_power_sums(M: int, power: int) -> list:
    s = [0] * (M + 1)
    for d in range(1, M + 1):
        dp = d ** power
        for n in range(d, M + 1, d):
            s[n] += dp
    return s


def e2(M: int, scale: int = 1) -> QSeries:
    """E2(scale * tau) = 1 - 24 sum sigma_1(n) q^(scale n)."""
    sig = _divisor_power_sums(M // scale if scale > 1 else M, 1)
    out = [Fraction(0)] * (M + 1)
    out[0] = Fraction(1)
    for n in range(1, len(sig)):
        if scale * n <= M:
            out[scale * n] = Fraction(-24 * sig[n])
    return QSeries(Fraction(0), tuple(out))


def e4(M: int, scale: int = 1) -> QSeries:
    sig = _divisor_power_sums(M // scale if scale > 1 else M, 3)
    out = [Fraction(0)] * (M + 1)
    out[0] = Fraction(1)
    for n in range(1, len(sig)):
        if scale * n <= M:
            out[scale * n] = Fraction(240 * sig[n])
    return QSeries(Fraction(0), tuple(out))


def lattice_theta(M: int) -> QSeries:
    """sum over (m, n) in Z^2 of q^(m^2+mn+n^2), truncated at q^M."""
    out = [0] * (M + 1)
    K = isqrt(4 * M // 3) + 2
    for m in range(-K, K + 1):
        for n in range(-K, K + 1):
            v = m * m + m * n + n * n
            if v <= M:
                out[v] += 1
    return QSeries(Fraction(0), tuple(Fraction(c) for c in out))


def _legendre5(n: int) -> int:
    return {0: 0, 1: 1, 2: -1, 3: -1, 4: 1}[n % 5]


def gamma1_5_t(M: int) -> QSeries:
    """q prod (1-q^n)^(5 chi_5(n)) for the level-5 case."""
    s = product_factors(M, lambda n: 5 * _legendre5(n))
    return QSeries(s.lead + 1, s.coeffs)


def gamma1_5_f(M: int) -> QSeries:
    def fexp(n):
        if n % 5 == 0:
            return 2
        return -3 if _legendre5(n) == 1 else 2
    return product_factors(M, fexp)


_lock = threading.Lock()
_tfg_cache: dict = {}


def case_t_series(case: SeriesCase, M: int) -> QSeries:
    recipe = case.t_recipe
    if recipe[0] == "eta":
        return eta_quotient(recipe[1], recipe[2], M)
    if recipe[0] == "gen5_t":
        return gamma1_5_t(M)
    raise AssertionError(recipe)


def case_f_series(case: SeriesCase, M: int) -> QSeries:
    recipe = case.f_recipe
    if recipe[0] == "eta":
        return eta_quotient(recipe[1], recipe[2], M)
    if recipe[0] == "gen5_f":
        return gamma1_5_f(M)
    if recipe[0] == "lattice":
        return lattice_theta(M)
    if recipe[0] == "sqrt_e2":
        return case_f2_series(case, M).sqrt()
    raise AssertionError(recipe)


def case_f2_series(case: SeriesCase, M: int) -> QSeries:
    """f^2; for the a=1/4 family this is 2 E2(2 tau) - E2(tau) exactly."""
    if case.f_recipe[0] == "sqrt_e2":
        return 2 * e2(M, scale=2) - e2(M)
    f = case_f_series(case, M)
    return f * f


def case_tfg(case: SeriesCase, M: int):
    """(t, f, g = theta_q t) as exact series through q^M (cached)."""
    if M < 2:
        raise ValueError("need M >= 2")
    key = (case.label, M)
    with _lock:
        if key in _tfg_cache:
            return _tfg_cache[key]
    t = case_t_series(case, M)
    f = case_f_series(case, M)
    g = t.theta_q()
    with _lock:
        _tfg_cache[key] = (t, f, g)
    return t, f, g


def tfg_identity_defect(case: SeriesCase, M: int):
    """First q-power where g deviates from its closed form, or None.

    Sporadic cases satisfy g = f^2 t (1 - a t + c t^2); the
    hypergeometric parameterizations satisfy g = f^2 t (checked against
    the exact expansions; the extra quadratic factor belongs to the
    sporadic normalization only).  For the a=1/4 family the comparison
    uses f^2 = 2E2(2tau) - E2(tau) directly, avoiding the formal square
    root.
    """
    t, _, g = case_tfg(case, M)
    f2 = case_f2_series(case, M)
    if case.is_sporadic:
        a, c = case.a, case.c
        rhs = f2 * t * (one(M) - a * monomial(0, M) * t + c * t * t)
    else:
        rhs = f2 * t
    d = g - rhs
    for k in range(d.M + 1):
        if d[k]:
            return d.lead + k
    return None
