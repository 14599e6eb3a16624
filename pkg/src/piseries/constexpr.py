"""Expression trees for the exact constants in the data tables.

The text grammar is tiny: sums of products of rationals and sqrt(...)
terms, e.g. `3*sqrt(35)`, `2*sqrt(8+6*sqrt(2))`, `15*sqrt(3)+sqrt(15)`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .bigfloat import ctx, GUARD


class ConstExpr:
    pass


@dataclass(frozen=True)
class Lit(ConstExpr):
    value: Fraction

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Sqrt(ConstExpr):
    arg: ConstExpr

    def __str__(self):
        return f"sqrt({self.arg})"


@dataclass(frozen=True)
class Prod(ConstExpr):
    factors: tuple

    def __str__(self):
        return "*".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class Sum(ConstExpr):
    terms: tuple

    def __str__(self):
        out = str(self.terms[0])
        for t in self.terms[1:]:
            s = str(t)
            out += s if s.startswith("-") else "+" + s
        return out


_TOKEN = re.compile(r"\s*(sqrt\(|\(|\)|\*|\+|-|\d+(?:/\d+)?)")


def parse_const(text: str) -> ConstExpr:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad constant expression at ...{text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)  # sentinel
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def parse_sum():
        terms = [parse_prod()]
        while peek() in ("+", "-"):
            op = take()
            t = parse_prod()
            if op == "-":
                t = Prod((Lit(Fraction(-1)), t))
            terms.append(t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_prod():
        factors = [parse_atom()]
        while peek() == "*":
            take()
            factors.append(parse_atom())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def parse_atom():
        t = take()
        if t == "sqrt(":
            inner = parse_sum()
            if take() != ")":
                raise ValueError("unbalanced sqrt(")
            return Sqrt(inner)
        if t == "(":
            inner = parse_sum()
            if take() != ")":
                raise ValueError("unbalanced (")
            return inner
        if t == "-":
            atom = parse_atom()
            return Prod((Lit(Fraction(-1)), atom))
        if t is None or t in ("+", "*", ")"):
            raise ValueError(f"unexpected token {t!r}")
        return Lit(Fraction(t))

    expr = parse_sum()
    if peek() is not None:
        raise ValueError(f"trailing input {tokens[idx:]!r}")
    return expr


def eval_const(e: ConstExpr, P: int):
    """Value as mpfr with relative error < 2^(8-P)."""
    with ctx(P + 2 * GUARD):
        result = _eval(e)
    with ctx(P):
        return gmpy2.mpfr(result)


def _eval(e: ConstExpr):
    if isinstance(e, Lit):
        return gmpy2.mpfr(gmpy2.mpq(e.value.numerator, e.value.denominator))
    if isinstance(e, Sqrt):
        v = _eval(e.arg)
        if v < 0:
            raise ValueError(f"sqrt of negative value {v} in constant expression")
        return gmpy2.sqrt(v)
    if isinstance(e, Prod):
        out = gmpy2.mpfr(1)
        for f in e.factors:
            out *= _eval(f)
        return out
    if isinstance(e, Sum):
        out = gmpy2.mpfr(0)
        for t in e.terms:
            out += _eval(t)
        return out
    raise TypeError(f"not a ConstExpr: {e!r}")
