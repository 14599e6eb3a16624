"""Case registry: the six sporadic recurrence triples and the three
hypergeometric families, together with their modular data.

Each case carries the recurrence parameters (a, b, c), the congruence
group and level, the roots alpha/beta of 1 - a*X + c*X^2, and symbolic
recipes for the weight-0 hauptmodul t and the weight-1 form f.  All of
this is kept in one table so it can be audited in a single screenful.

Recipe encoding:
    ("eta", scalar, {delta: exponent})   scalar * prod eta(delta*tau)^exponent
    ("lattice",)                         sum over Z^2 of q^(m^2+mn+n^2)
    ("sqrt_e2",)                         (2*E2(2*tau) - E2(tau))^(1/2)
    ("gen5_t",), ("gen5_f",)             level-5 generalized-eta products
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .quadfield import Mat, QuadNum

Root = Union[Fraction, QuadNum]
Recipe = tuple


@dataclass(frozen=True)
class SeriesCase:
    kind: str                 # "sporadic" | "hyper"
    a: Fraction               # recurrence parameters: (n+1)^2 u_{n+1}
    b: Fraction               #   = (a n^2 + a n + b) u_n - c n^2 u_{n-1}
    c: Fraction
    hyper_a: Fraction | None  # the parameter of (a)_n (1-a)_n / (n!)^2, or None
    level: int
    group: str
    label: str                # short id used in table files and reports
    alpha: Root
    beta: Root
    t_recipe: Recipe
    f_recipe: Recipe
    normalizers: dict = field(default_factory=dict, compare=False, hash=False)
    sigma1: str = ""          # tag realizing t -> 1/(c t)
    sigma2: str = ""          # tag realizing t -> (1-alpha t)/(alpha (1-beta t))

    @property
    def is_sporadic(self) -> bool:
        return self.kind == "sporadic"

    @property
    def abc(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    def growth_bound(self) -> float:
        """Upper bound on max(|alpha|, |beta|), governing |u_n|^(1/n)."""
        if self.kind == "hyper":
            return 1.0
        if isinstance(self.alpha, QuadNum) and self.alpha.D < 0:
            # complex pair: |alpha| = |beta| = sqrt(|c|)
            return float(abs(self.c)) ** 0.5
        vals = []
        for r in (self.alpha, self.beta):
            vals.append(abs(float(r.p) + float(r.q) * float(r.D) ** 0.5)
                        if isinstance(r, QuadNum) else abs(float(r)))
        return max(vals)

    def __repr__(self):
        if self.kind == "sporadic":
            return f"SeriesCase({self.a},{self.b},{self.c})"
        return f"SeriesCase(a={self.hyper_a})"


def _frac(x) -> Fraction:
    return Fraction(x)


_W2_6: Mat = (2, -1, 6, -2)
_W3_6: Mat = (-3, -2, 6, 3)
_W6: Mat = (0, -1, 6, 0)
_W8: Mat = (0, -1, 8, 0)
_S8: Mat = (4, 1, 8, 4)
_V8: Mat = (2, -1, 8, -2)      # = s8*w8 in the quotient group
_W9: Mat = (0, -1, 9, 0)
_S9: Mat = (-3, -2, 9, 3)
_W5: Mat = (0, -1, 5, 0)
_S5: Mat = (2, -1, 5, -2)
_W4: Mat = (1, 0, 2, 1)        # normalizes Gamma_0(4)
_W3: Mat = (0, -1, 3, 0)
_W2: Mat = (0, -1, 2, 0)


def _sporadic(a, b, c, level, group, label, alpha, beta, t_recipe, f_recipe,
              normalizers, sigma1, sigma2):
    return SeriesCase(
        kind="sporadic", a=_frac(a), b=_frac(b), c=_frac(c), hyper_a=None,
        level=level, group=group, label=label, alpha=alpha, beta=beta,
        t_recipe=t_recipe, f_recipe=f_recipe, normalizers=normalizers,
        sigma1=sigma1, sigma2=sigma2,
    )


SPORADIC_CASES: dict[tuple, SeriesCase] = {}
for case in [
    _sporadic(7, 2, -8, 6, "Gamma0(6)", "728",
              _frac(-1), _frac(8),
              ("eta", _frac(1), {1: 3, 6: 9, 2: -3, 3: -9}),
              ("eta", _frac(1), {2: 1, 3: 6, 1: -2, 6: -3}),
              {"w2": (_W2_6, 1), "w3": (_W3_6, -1), "w6": (_W6, -1)},
              "w2", "w3"),
    _sporadic(10, 3, 9, 6, "Gamma0(6)", "1039",
              _frac(1), _frac(9),
              ("eta", _frac(1), {1: 4, 6: 8, 2: -8, 3: -4}),
              ("eta", _frac(1), {2: 6, 3: 1, 1: -3, 6: -2}),
              {"w2": (_W2_6, -1), "w3": (_W3_6, 1), "w6": (_W6, -1)},
              "w3", "w2"),
    _sporadic(-17, -6, 72, 6, "Gamma0(6)", "17672",
              _frac(-8), _frac(-9),
              ("eta", _frac(1), {2: 1, 6: 5, 1: -5, 3: -1}),
              ("eta", _frac(1), {1: 6, 6: 1, 2: -3, 3: -2}),
              {"w2": (_W2_6, -1), "w3": (_W3_6, -1), "w6": (_W6, 1)},
              "w6", "w2"),
    _sporadic(12, 4, 32, 8, "Gamma0(8)", "12432",
              _frac(4), _frac(8),
              ("eta", _frac(1), {1: 4, 4: 2, 8: 4, 2: -10}),
              ("eta", _frac(1), {2: 10, 1: -4, 4: -4}),
              {"s8": (_S8, 1), "w8": (_W8, -1), "v8": (_V8, -1)},
              "s8", "v8"),
    _sporadic(-9, -3, 27, 9, "Gamma0(9)", "9327",
              QuadNum(-3, Fraction(-9, 2), Fraction(3, 2)),
              QuadNum(-3, Fraction(-9, 2), Fraction(-3, 2)),
              ("eta", _frac(1), {9: 3, 1: -3}),
              ("eta", _frac(1), {1: 3, 3: -1}),
              {"w9": (_W9, 1), "s9": (_S9, -1)},
              "w9", "s9"),
    _sporadic(11, 3, -1, 5, "Gamma1(5)", "1131",
              QuadNum(5, Fraction(11, 2), Fraction(5, 2)),
              QuadNum(5, Fraction(11, 2), Fraction(-5, 2)),
              ("gen5_t",),
              ("gen5_f",),
              {"s5": (_S5, 1), "w5": (_W5, -1)},
              "s5", "w5"),
]:
    SPORADIC_CASES[(case.a, case.b, case.c)] = case


def _hyper(a, level, group, label, t_recipe, f_recipe, normalizers):
    aa = _frac(a)
    return SeriesCase(
        kind="hyper", a=_frac(1), b=aa * (1 - aa), c=_frac(0), hyper_a=aa,
        level=level, group=group, label=label,
        alpha=_frac(1), beta=_frac(0),
        t_recipe=t_recipe, f_recipe=f_recipe, normalizers=normalizers,
        sigma1="", sigma2="",
    )


HYPER_CASES: dict[Fraction, SeriesCase] = {}
for case in [
    _hyper(Fraction(1, 2), 4, "Gamma0(4)", "h2",
           ("eta", _frac(16), {1: 8, 4: 16, 2: -24}),
           ("eta", _frac(1), {1: 4, 2: -2}),          # theta4(tau)^2
           {"w4": (_W4, -1)}),
    _hyper(Fraction(1, 3), 3, "Gamma0(3)", "h3",
           ("eta", _frac(-27), {3: 12, 1: -12}),
           ("lattice",),
           {"w3": (_W3, -1)}),
    _hyper(Fraction(1, 4), 2, "Gamma0(2)", "h4",
           ("eta", _frac(-64), {2: 24, 1: -24}),
           ("sqrt_e2",),
           {"w2": (_W2, 1)}),                          # character of F^2
]:
    HYPER_CASES[case.hyper_a] = case

ALL_CASES: list[SeriesCase] = list(SPORADIC_CASES.values()) + list(HYPER_CASES.values())
_BY_LABEL = {c.label: c for c in ALL_CASES}


def sporadic_case(a, b, c) -> SeriesCase:
    key = (_frac(a), _frac(b), _frac(c))
    if key not in SPORADIC_CASES:
        raise KeyError(f"({a},{b},{c}) is not one of the six sporadic triples")
    return SPORADIC_CASES[key]


def hyper_case(a) -> SeriesCase:
    key = _frac(a)
    if key not in HYPER_CASES:
        raise KeyError(f"a={a} must be one of 1/2, 1/3, 1/4")
    return HYPER_CASES[key]


def case_from_tag(tag: str) -> SeriesCase:
    """Accept "7,2,-8", "a=1/3", or a short label like "728"."""
    tag = tag.strip()
    if tag in _BY_LABEL:
        return _BY_LABEL[tag]
    if tag.startswith("a="):
        return hyper_case(Fraction(tag[2:]))
    parts = tag.strip("()").split(",")
    if len(parts) == 3:
        return sporadic_case(*(Fraction(p) for p in parts))
    raise KeyError(f"unknown case tag {tag!r}")
