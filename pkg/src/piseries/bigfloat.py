"""Arbitrary-precision plumbing on top of gmpy2.

Precision is always an explicit parameter P (mantissa bits); functions
open a scoped gmpy2 context and never rely on the caller's ambient
precision.  Rounding is nearest-even.  The working budget inside a
composite operation is P plus a guard margin, and the documented error
bounds (2^(8-P) relative for composites) are enforced by the
escalation tests in the test suite.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

GUARD = 8


def ctx(P: int):
    """Scoped context at P bits (use as `with ctx(P):`)."""
    if P < 32:
        raise ValueError("precision must be at least 32 bits")
    return gmpy2.context(precision=P)


def pi_const(P: int):
    """pi to relative error < 2^(2-P)."""
    with ctx(P):
        return gmpy2.const_pi()


def to_mpfr(x, P: int):
    with ctx(P):
        if isinstance(x, Fraction):
            return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
        return gmpy2.mpfr(x)


def to_mpc(x, P: int):
    with ctx(P):
        if isinstance(x, Fraction):
            return gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator)))
        if isinstance(x, tuple):
            return gmpy2.mpc(to_mpfr(x[0], P), to_mpfr(x[1], P))
        return gmpy2.mpc(x)


def re_im(z):
    if isinstance(z, gmpy2.mpc):
        return z.real, z.imag
    return z, gmpy2.mpfr(0)


def exact_fraction(x) -> Fraction:
    """Exact rational value of an mpfr (dyadic)."""
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def parse_mpc(text: str, P: int):
    """Parse 'a+bi' / 'a-bi' / 'a' / 'bi' into an mpc at P bits."""
    s = text.strip().replace(" ", "")
    with ctx(P):
        if s.endswith(("i", "j")):
            body = s[:-1]
            # split off the imaginary coefficient
            for k in range(len(body) - 1, 0, -1):
                if body[k] in "+-" and body[k - 1] not in "eE":
                    re_part, im_part = body[:k], body[k:]
                    break
            else:
                re_part, im_part = "0", body
            if im_part in ("", "+", "-"):
                im_part += "1"
            return gmpy2.mpc(gmpy2.mpfr(re_part), gmpy2.mpfr(im_part))
        return gmpy2.mpc(gmpy2.mpfr(s))


def recognize_rational(v, max_den: int, tol) -> Fraction | None:
    """Continued-fraction convergent p/q of v with q <= max_den and
    |v - p/q| < tol, or None.  v may be mpfr or mpc (imaginary part must
    already be below tol)."""
    re, im = re_im(v)
    tol_f = Fraction(tol) if not isinstance(tol, float) else Fraction(tol)
    if abs(exact_fraction(im) if im else 0) >= tol_f:
        return None
    x = exact_fraction(re)
    target = x
    # convergents of the simple continued fraction of x
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = x.numerator // x.denominator
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_den:
            return None
        if abs(target - Fraction(p1, q1)) < tol_f:
            return Fraction(p1, q1)
        frac = x - a
        if frac == 0:
            return None
        x = 1 / frac


def _prec_of(x) -> int:
    p = getattr(x, "precision", 53)
    if isinstance(p, tuple):
        return max(p)
    return p


def agree_bits(a, b) -> int:
    """Number of leading bits on which a and b agree (relative)."""
    with gmpy2.context(precision=max(_prec_of(a), _prec_of(b), 53) + 16):
        a = gmpy2.mpc(a)
        b = gmpy2.mpc(b)
        d = abs(a - b)
        scale = max(abs(a), abs(b))
        if d == 0:
            return 1 << 30
        if scale == 0:
            return 0
        r = d / scale
        return max(0, int(-gmpy2.log2(r)))
