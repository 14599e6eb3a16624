"""Exact arithmetic in real or imaginary quadratic fields Q(sqrt(D)).

Numbers are stored as p + q*sqrt(D) with rational p, q and a fixed integer
D that is not a perfect square.  For D < 0 these are the exact CM-point
coordinates; embedding into arbitrary-precision complex numbers happens
only at the very end of a computation.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import gmpy2

Mat = tuple[int, int, int, int]  # (a, b, c, d) row-major


def mat_mul(m1: Mat, m2: Mat) -> Mat:
    a, b, c, d = m1
    p, q, r, s = m2
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def mat_det(m: Mat) -> int:
    a, b, c, d = m
    return a * d - b * c


def mat_adj(m: Mat) -> Mat:
    a, b, c, d = m
    return (d, -b, -c, a)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


class QuadNum:
    """p + q*sqrt(D) with exact rational p, q."""

    __slots__ = ("D", "p", "q")

    def __init__(self, D: int, p, q=0):
        if is_square(D):
            raise ValueError(f"D={D} must not be a perfect square")
        self.D = D
        self.p = Fraction(p)
        self.q = Fraction(q)

    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other.D != self.D and other.q != 0 and self.q != 0:
                raise ValueError("mixed radicands")
            return other
        return QuadNum(self.D, Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return QuadNum(self.D, self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(self.D, -self.p, -self.q)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadNum(
            self.D,
            self.p * o.p + self.q * o.q * self.D,
            self.p * o.q + self.q * o.p,
        )

    __rmul__ = __mul__

    def conj(self):
        return QuadNum(self.D, self.p, -self.q)

    def norm(self) -> Fraction:
        """Field norm p^2 - D q^2 (= |z|^2 when D < 0)."""
        return self.p * self.p - self.D * self.q * self.q

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element of Q(sqrt(D))")
        return QuadNum(self.D, self.p / n, -self.q / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        return hash((self.p, self.q if self.q else 0, self.D if self.q else 0))

    def is_rational(self) -> bool:
        return self.q == 0

    def __repr__(self):
        if self.q == 0:
            return f"{self.p}"
        return f"({self.p}+{self.q}*sqrt({self.D}))"

    def to_mpc(self, P: int):
        """Embed at precision P bits (sqrt(D) -> i*sqrt(|D|) for D < 0)."""
        with gmpy2.context(precision=P):
            p = gmpy2.mpfr(self.p.numerator) / self.p.denominator
            q = gmpy2.mpfr(self.q.numerator) / self.q.denominator
            if self.D >= 0:
                return gmpy2.mpc(p + q * gmpy2.sqrt(gmpy2.mpfr(self.D)))
            return gmpy2.mpc(p, q * gmpy2.sqrt(gmpy2.mpfr(-self.D)))


def mobius(m: Mat, z: QuadNum) -> QuadNum:
    a, b, c, d = m
    return (z * a + b) / (z * c + d)
