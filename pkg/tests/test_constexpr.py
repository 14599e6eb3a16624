from fractions import Fraction

import gmpy2
import pytest

from piseries.bigfloat import agree_bits, ctx
from piseries.constexpr import Prod, Sqrt, Sum, eval_const, parse_const


def test_simple_product():
    e = parse_const("3*sqrt(35)")
    v = eval_const(e, 96)
    assert str(v).startswith("17.7482393")


def test_rational_literal():
    assert eval_const(parse_const("12"), 64) == 12
    assert eval_const(parse_const("5/8"), 64) == Fraction(5, 8)


def test_nested_sqrt():
    # 2 sqrt(8 + 6 sqrt 2) = 8.120414...
    v = eval_const(parse_const("2*sqrt(8+6*sqrt(2))"), 128)
    with ctx(128):
        direct = 2 * gmpy2.sqrt(8 + 6 * gmpy2.sqrt(gmpy2.mpfr(2)))
    assert agree_bits(v, direct) >= 118
    assert str(v).startswith("8.1204141")


def test_sums_and_parens():
    v = eval_const(parse_const("15*sqrt(3)+sqrt(15)"), 96)
    with ctx(96):
        direct = 15 * gmpy2.sqrt(gmpy2.mpfr(3)) + gmpy2.sqrt(gmpy2.mpfr(15))
    assert agree_bits(v, direct) >= 88
    v2 = eval_const(parse_const("8*(2+sqrt(5))"), 96)
    with ctx(96):
        direct2 = 8 * (2 + gmpy2.sqrt(gmpy2.mpfr(5)))
    assert agree_bits(v2, direct2) >= 88


def test_negative_sqrt_raises():
    with pytest.raises(ValueError):
        eval_const(parse_const("sqrt(3-8)"), 64)


def test_parse_errors():
    for bad in ("sqrt(", "3**5", "sqrt 35", "3*", ""):
        with pytest.raises(ValueError):
            parse_const(bad)


def test_str_roundtrip():
    for text in ("3*sqrt(35)", "2*sqrt(8+6*sqrt(2))", "15*sqrt(3)+sqrt(15)",
                 "-1/2+sqrt(7)"):
        e = parse_const(text)
        e2 = parse_const(str(e))
        assert eval_const(e, 96) == eval_const(e2, 96)


def test_escalation():
    e = parse_const("2*sqrt(8+6*sqrt(2))")
    assert agree_bits(eval_const(e, 96), eval_const(e, 256)) >= 88


def test_tree_shape():
    e = parse_const("2*sqrt(8+6*sqrt(2))")
    assert isinstance(e, Prod)
    assert isinstance(e.factors[1], Sqrt)
    assert isinstance(e.factors[1].arg, Sum)
