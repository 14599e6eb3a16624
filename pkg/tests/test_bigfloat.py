from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from piseries.bigfloat import (agree_bits, ctx, parse_mpc, pi_const,
                               recognize_rational, to_mpfr, to_mpc)


def test_pi_value():
    p = pi_const(64)
    assert str(p).startswith("3.14159265358979")
    assert agree_bits(pi_const(256), pi_const(128)) >= 120
    with ctx(128):
        inv = 1 / pi_const(128)
    assert str(inv).startswith("0.31830988618")


def test_precision_floor():
    with pytest.raises(ValueError):
        pi_const(16)


@given(st.integers(33, 400))
@settings(max_examples=20, deadline=None)
def test_escalation_consistency(P):
    # results at P and 2P agree to at least P - 8 bits
    assert agree_bits(pi_const(P), pi_const(2 * P)) >= P - 8
    x = Fraction(-7, 13)
    with ctx(2 * P + 8):
        a = gmpy2.sqrt(gmpy2.exp(to_mpfr(x, P)))
        b = gmpy2.sqrt(gmpy2.exp(to_mpfr(x, 2 * P)))
    assert agree_bits(a, b) >= P - 8


def test_recognize_rational_spec_examples():
    v = to_mpfr(Fraction(-71, 1008), 192)
    assert recognize_rational(v, 10 ** 6, Fraction(1, 10 ** 30)) == Fraction(-71, 1008)
    assert recognize_rational(to_mpfr(Fraction(1, 4), 64), 10 ** 6,
                              Fraction(1, 10 ** 10)) == Fraction(1, 4)
    with ctx(256):
        s2 = gmpy2.sqrt(gmpy2.mpfr(2))
    assert recognize_rational(s2, 10 ** 6, Fraction(1, 10 ** 30)) is None


def test_recognize_rejects_large_imaginary():
    z = to_mpc((0.25, 0.5), 96)
    assert recognize_rational(z, 100, Fraction(1, 10 ** 6)) is None


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 4),
       st.integers(-2, 2))
@settings(max_examples=100, deadline=None)
def test_legendre_criterion(p, q, eps_sign):
    # p/q + delta with |delta| < 1/(3 q max_den) is recovered
    frac = Fraction(p, q)
    max_den = 10 ** 5
    delta = Fraction(eps_sign, 3 * q * max_den + 1)
    v = to_mpfr(frac + delta, 256)
    got = recognize_rational(v, max_den, Fraction(1, q * max_den))
    assert got == frac


def test_parse_mpc():
    z = parse_mpc("0.5+1.25i", 96)
    assert z.real == 0.5 and z.imag == 1.25
    z = parse_mpc("-2i", 96)
    assert z.real == 0 and z.imag == -2
    z = parse_mpc("3.5", 96)
    assert z.real == 3.5 and z.imag == 0
    z = parse_mpc("1e-2+2e-1i", 96)
    assert abs(float(z.real) - 0.01) < 1e-12 and abs(float(z.imag) - 0.2) < 1e-12
