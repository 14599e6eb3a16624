"""Truncated bivariate power series over Q, and the formal identity
checks built on them: the two-variable product identity behind every
series in the tables, the five families of partial differential systems,
and Brafman's hypergeometric product formula.

A BiSeries stores coefficients for total degree <= order in a sparse
map.  All arithmetic is exact; a check either passes identically or
reports the first offending coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .cases import SeriesCase, hyper_case, SPORADIC_CASES
from .sequences import apery_seq, hyper_u, double_coeff, legendre


@dataclass(frozen=True)
class BiSeries:
    """Total-degree truncated series sum c[i,j] X^i Y^j, i+j <= order."""

    order: int
    coeffs: dict

    @staticmethod
    def from_terms(order, terms) -> "BiSeries":
        c = {k: Fraction(v) for k, v in terms.items()
             if v and k[0] + k[1] <= order}
        return BiSeries(order, c)

    @staticmethod
    def const(order, value) -> "BiSeries":
        return BiSeries.from_terms(order, {(0, 0): Fraction(value)})

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiSeries.const(self.order, other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = c.get(k, Fraction(0)) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return BiSeries(min(self.order, other.order), c)

    def __neg__(self):
        return BiSeries(self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiSeries.const(self.order, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return BiSeries(self.order, {})
            return BiSeries(self.order,
                            {k: v * other for k, v in self.coeffs.items()})
        order = min(self.order, other.order)
        c: dict = {}
        for (i1, j1), v1 in self.coeffs.items():
            if i1 + j1 > order:
                continue
            for (i2, j2), v2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j > order:
                    continue
                k = (i, j)
                s = c.get(k, Fraction(0)) + v1 * v2
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        return BiSeries(order, c)

    __rmul__ = __mul__

    def shift(self, di: int, dj: int) -> "BiSeries":
        """Multiply by X^di Y^dj, truncating at the same order."""
        c = {}
        for (i, j), v in self.coeffs.items():
            if i + di + j + dj <= self.order:
                c[(i + di, j + dj)] = v
        return BiSeries(self.order, c)

    def theta(self, axis: int) -> "BiSeries":
        """theta_X (axis 0) or theta_Y (axis 1): c[i,j] -> i*c or j*c."""
        c = {k: v * k[axis] for k, v in self.coeffs.items() if k[axis]}
        return BiSeries(self.order, c)

    def invert(self) -> "BiSeries":
        """Reciprocal series; requires a nonzero constant term."""
        c0 = self[(0, 0)]
        if c0 == 0:
            raise ZeroDivisionError("series has zero constant term")
        inv = {(0, 0): 1 / c0}
        # solve degree by degree: sum_{k<=n} self_k * inv_{n-k} = [n==0]
        by_deg: dict[int, list] = {}
        for (i, j), v in self.coeffs.items():
            by_deg.setdefault(i + j, []).append((i, j, v))
        for n in range(1, self.order + 1):
            for i in range(n + 1):
                j = n - i
                acc = Fraction(0)
                for d in range(1, n + 1):
                    for (si, sj, sv) in by_deg.get(d, ()):
                        ii, jj = i - si, j - sj
                        if ii >= 0 and jj >= 0:
                            w = inv.get((ii, jj))
                            if w:
                                acc += sv * w
                if acc:
                    inv[(i, j)] = -acc / c0
        return BiSeries(self.order, {k: v for k, v in inv.items() if v})

    def pow(self, e: int) -> "BiSeries":
        if e < 0:
            return self.invert().pow(-e)
        result = BiSeries.const(self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def max_degree_terms(self) -> int:
        return max((i + j for i, j in self.coeffs), default=-1)

    def first_nonzero(self, through: int | None = None):
        """Lowest (by total degree, then i) nonzero coefficient, or None."""
        limit = self.order if through is None else through
        best = None
        for (i, j), v in self.coeffs.items():
            if v and i + j <= limit:
                if best is None or (i + j, i) < (best[0] + best[1], best[0]):
                    best = (i, j)
        return best


def series_F(case: SeriesCase, D: int) -> BiSeries:
    """sum_n u_n sum_m C(n,2m) C(2m,m) x^n y^m through total degree D."""
    if D < 0:
        raise ValueError("D must be >= 0")
    u = apery_seq(case, D)
    terms = {}
    for n in range(D + 1):
        for m in range(min(n // 2, D - n) + 1):
            terms[(n, m)] = u[n] * double_coeff(n, m)
    return BiSeries.from_terms(D, terms)


def substitute_xy(case: SeriesCase, D: int) -> tuple[BiSeries, BiSeries]:
    """Expansions of x(X, Y) and x(X, Y)^2 * y(X, Y) through degree D.

    y itself has a pole at (X, Y) = (0, 0): its denominator
    ((X+Y)(1+cXY) - 2aXY)^2 vanishes there, so y is not a power series.
    x^2 y = XY (1-aX+cX^2)(1-aY+cY^2) / (1-cXY)^4 is the smallest
    polynomial multiple of y that is regular, and is what gets returned
    in the second slot.
    """
    if D < 2:
        raise ValueError("order too small to cancel the pole of y (need D >= 2)")
    a, c = case.a, case.c
    nx = BiSeries.from_terms(D, {
        (1, 0): 1, (0, 1): 1, (2, 1): c, (1, 2): c, (1, 1): -2 * a,
    })
    one_m_cxy = BiSeries.from_terms(D, {(0, 0): 1, (1, 1): -c})
    inv2 = one_m_cxy.invert().pow(2)
    x = nx * inv2
    qx = BiSeries.from_terms(D, {(0, 0): 1, (1, 0): -a, (2, 0): c})
    qy = BiSeries.from_terms(D, {(0, 0): 1, (0, 1): -a, (0, 2): c})
    x2y = BiSeries.from_terms(D, {(1, 1): 1}) * qx * qy * inv2 * inv2
    return x, x2y


def wz_check(case: SeriesCase, D: int):
    """Compare both sides of the two-variable product identity

        sum u_n sum_m C(2m,m) C(n,2m) x^n y^m
            = (1 - c X Y) (sum u_n X^n)(sum u_n Y^n)

    as exact series in (X, Y) through total degree D.  The left side is
    assembled from x^n y^m = NX^(n-2m) (XY qx qy)^m (1-cXY)^(-2n), which
    keeps everything inside the formal power-series ring.  Returns
    (ok, first_mismatch) with first_mismatch = None on success.
    """
    if D < 2:
        raise ValueError("need D >= 2")
    a, c = case.a, case.c
    u = apery_seq(case, D)
    nx = BiSeries.from_terms(D, {
        (1, 0): 1, (0, 1): 1, (2, 1): c, (1, 2): c, (1, 1): -2 * a,
    })
    qx = BiSeries.from_terms(D, {(0, 0): 1, (1, 0): -a, (2, 0): c})
    qy = BiSeries.from_terms(D, {(0, 0): 1, (0, 1): -a, (0, 2): c})
    ynum = BiSeries.from_terms(D, {(1, 1): 1}) * qx * qy
    inv = BiSeries.from_terms(D, {(0, 0): 1, (1, 1): -c}).invert()
    inv2 = inv * inv

    nx_pow = [BiSeries.const(D, 1)]
    for _ in range(D):
        nx_pow.append(nx_pow[-1] * nx)
    ynum_pow = [BiSeries.const(D, 1)]
    for _ in range(D // 2):
        ynum_pow.append(ynum_pow[-1] * ynum)

    lhs = BiSeries(D, {})
    w = BiSeries.const(D, 1)          # (1-cXY)^(-2n)
    for n in range(D + 1):
        for m in range(n // 2 + 1):
            coeff = u[n] * double_coeff(n, m)
            lhs = lhs + coeff * (nx_pow[n - 2 * m] * ynum_pow[m] * w)
        w = w * inv2

    sx = BiSeries.from_terms(D, {(n, 0): u[n] for n in range(D + 1)})
    sy = BiSeries.from_terms(D, {(0, n): u[n] for n in range(D + 1)})
    rhs = BiSeries.from_terms(D, {(0, 0): 1, (1, 1): -c}) * sx * sy

    diff = lhs - rhs
    bad = diff.first_nonzero()
    return bad is None, bad


# ---------------------------------------------------------------------------
# PDE systems
# ---------------------------------------------------------------------------

def _poly_op(F: BiSeries, *monomials) -> BiSeries:
    """sum of coeff * x^i y^j * (theta_x^p theta_y^q F) terms.

    Each monomial is (coeff, i, j, p, q); the thetas are applied first,
    then the shift by x^i y^j.
    """
    out = BiSeries(F.order, {})
    for coeff, i, j, p, q in monomials:
        G = F
        for _ in range(p):
            G = G.theta(0)
        for _ in range(q):
            G = G.theta(1)
        out = out + Fraction(coeff) * G.shift(i, j)
    return out


def _series_t2n(D: int) -> BiSeries:
    u = hyper_u(Fraction(1, 2), D)
    terms = {}
    for n in range(D + 1):
        for m in range(min(n, D - n) + 1):
            terms[(n, m)] = u[n] * comb(2 * n, 2 * m) * comb(2 * m, m)
    return BiSeries.from_terms(D, terms)


def _series_rs(D: int) -> BiSeries:
    terms = {}
    for n in range(D + 1):
        for m in range(min(n, D - n) + 1):
            v = comb(2 * n, n) * comb(n, m) ** 2 * comb(2 * m, n)
            if v:
                terms[(n, m)] = Fraction(v)
    return BiSeries.from_terms(D, terms)


def _series_cubic(D: int) -> BiSeries:
    u = hyper_u(Fraction(1, 3), D)
    terms = {}
    for n in range(D + 1):
        for m in range(min(3 * n // 2, D - n) + 1):
            terms[(n, m)] = u[n] * comb(3 * n, 2 * m) * comb(2 * m, m)
    return BiSeries.from_terms(D, terms)


def _second_equation(F: BiSeries, k: int) -> BiSeries:
    """theta_y^2 F - y (2 theta_y - k theta_x + 1)(2 theta_y - k theta_x) F."""
    G = _poly_op(F, (2, 0, 0, 0, 1), (-k, 0, 0, 1, 0))           # (2ty-ktx)F
    G = _poly_op(G, (2, 0, 0, 0, 1), (-k, 0, 0, 1, 0)) + G       # (2ty-ktx+1)(...)
    return _poly_op(F, (1, 0, 0, 0, 2)) - _poly_op(G, (1, 0, 1, 0, 0))


def _residual_sporadic(case: SeriesCase, D: int):
    a, b, c = case.abc
    F = series_F(case, D)
    e1 = _poly_op(F, (1, 0, 0, 2, 0), (-2, 0, 0, 1, 1))          # tx(tx-2ty)F
    e1 = e1 - _poly_op(F, (a, 1, 0, 2, 0), (a, 1, 0, 1, 0), (b, 1, 0, 0, 0))
    G = _poly_op(F, (1, 0, 0, 1, 0)) + F                          # (tx+1)F
    e1 = e1 + c * _poly_op(G, (1, 2, 0, 1, 0)) + c * G.shift(2, 0)
    H = _poly_op(F, (4, 0, 1, 1, 0), (2, 0, 0, 0, 1), (-8, 0, 1, 0, 1))
    H = _poly_op(H, (1, 0, 0, 1, 0)) + H                          # (tx+1)(...)
    e1 = e1 + c * H.shift(2, 0)
    e2 = _second_equation(F, 1)
    return [e1, e2], 3


def _residual_hyper(case: SeriesCase, D: int):
    a = case.hyper_a
    F = series_F(case, D)
    G = _poly_op(F, (1, 0, 0, 1, 0)) + a * F                      # (tx+a)F
    G = _poly_op(G, (1, 0, 0, 1, 0)) + (1 - a) * G                # (tx+1-a)(...)
    e1 = _poly_op(F, (1, 0, 0, 2, 0), (-2, 0, 0, 1, 1)) - G.shift(1, 0)
    e2 = _second_equation(F, 1)
    return [e1, e2], 2


def _residual_t2n(D: int):
    F = _series_t2n(D)
    e1 = _poly_op(F, (4, 0, 0, 2, 0), (-4, 0, 0, 1, 1))          # 4tx(tx-ty)F
    G = _poly_op(F, (2, 0, 0, 1, 0)) + F                          # (2tx+1)F
    e1 = e1 - _poly_op(G, (2, 1, 0, 1, 0)) - G.shift(1, 0)        # -x(2tx+1)^2F
    H = _poly_op(F, (4, 0, 1, 1, 0), (1, 0, 0, 0, 1), (-4, 0, 1, 0, 1))
    H = _poly_op(H, (2, 0, 0, 1, 0)) + H                          # (2tx+1)(...)
    e1 = e1 - 2 * H.shift(1, 0)
    e2 = _second_equation(F, 2)
    return [e1, e2], 2


def _residual_rs(D: int):
    F = _series_rs(D)
    G = _poly_op(F, (1, 0, 0, 1, 0), (-1, 0, 0, 0, 1))            # (tx-ty)F
    e1 = _poly_op(G, (1, 0, 0, 1, 0), (-1, 0, 0, 0, 1))           # (tx-ty)^2F
    H = _poly_op(F, (2, 0, 0, 1, 0)) + F                          # (2tx+1)F
    H = _poly_op(H, (1, 0, 0, 1, 0), (-2, 0, 0, 0, 1))            # (tx-2ty)(...)
    e1 = e1 + 2 * H.shift(1, 0)
    K = _poly_op(F, (2, 0, 0, 0, 1), (-1, 0, 0, 1, 0))            # (2ty-tx)F
    e2 = _poly_op(K, (1, 0, 0, 0, 1))                             # ty(2ty-tx)F
    L = _poly_op(F, (2, 0, 0, 0, 1)) + F                          # (2ty+1)F
    L = _poly_op(L, (2, 0, 0, 1, 0)) + L                          # (2tx+1)(...)
    e2 = e2 - 4 * L.shift(1, 1)
    return [e1, e2], 2


def _residual_cubic(D: int):
    F = _series_cubic(D)
    e1 = _poly_op(F, (9, 0, 0, 2, 0), (-6, 0, 0, 1, 1))          # 3tx(3tx-2ty)F
    G = _poly_op(F, (3, 0, 0, 1, 0)) + 2 * F                      # (3tx+2)F
    G = _poly_op(G, (3, 0, 0, 1, 0)) + G + 2 * G.shift(0, 1)      # (3tx+2y+1)(...)
    e1 = e1 - G.shift(1, 0)
    H = _poly_op(F, (1, 0, 0, 0, 1), (-4, 0, 1, 0, 1), (9, 0, 1, 1, 0))
    H = _poly_op(H, (2, 0, 0, 1, 0)) + H                          # (2tx+1)(...)
    e1 = e1 - 6 * H.shift(1, 0)
    e2 = _second_equation(F, 3)
    return [e1, e2], 3


def pde_systems() -> list[str]:
    """Identifiers accepted by pde_residual."""
    names = [f"sporadic:{c.label}" for c in SPORADIC_CASES.values()]
    names += ["hyper:1/2", "hyper:1/3", "hyper:1/4", "t2n", "rs", "cubic"]
    return names


def pde_residual(system: str, D: int):
    """Apply one PDE system to its double series; both residuals must
    vanish identically through the trusted degree.

    Returns (ok, trusted_degree, details) where details lists, per
    equation, the first nonzero residual coefficient (None if clean).
    """
    if D < 4:
        raise ValueError("need D >= 4")
    if system.startswith("sporadic:"):
        case = next(c for c in SPORADIC_CASES.values()
                    if c.label == system.split(":")[1])
        residuals, shift = _residual_sporadic(case, D)
    elif system.startswith("hyper:"):
        residuals, shift = _residual_hyper(hyper_case(system.split(":")[1]), D)
    elif system == "t2n":
        residuals, shift = _residual_t2n(D)
    elif system == "rs":
        residuals, shift = _residual_rs(D)
    elif system == "cubic":
        residuals, shift = _residual_cubic(D)
    else:
        raise KeyError(f"unknown PDE system {system!r}")
    trusted = D - shift
    details = [r.first_nonzero(through=trusted) for r in residuals]
    ok = all(d is None for d in details)
    return ok, trusted, details


# ---------------------------------------------------------------------------
# Brafman's formula
# ---------------------------------------------------------------------------

def _f21_series(a: Fraction, arg: BiSeries) -> BiSeries:
    """2F1(a, 1-a; 1; arg) for a series arg with zero constant term."""
    if arg[(0, 0)] != 0:
        raise ValueError("argument series must vanish at the origin")
    D = arg.order
    coef = hyper_u(a, D)          # (a)_k (1-a)_k / (k!)^2
    out = BiSeries.const(D, 1)
    p = BiSeries.const(D, 1)
    for k in range(1, D + 1):
        p = p * arg
        if not p.coeffs:
            break
        out = out + coef[k] * p
    return out


def brafman_check(a, D: int):
    """Exact check of the generating identity

        sum_n (a)_n (1-a)_n / (n!)^2 P_n(x) t^n
            = 2F1(a,1-a;1;(1-t-rho)/2) 2F1(a,1-a;1;(1+t-rho)/2),

    rho = (1 - 2xt + t^2)^(1/2), as bivariate series in (x, t) through
    total degree D.  Returns (ok, first_mismatch).
    """
    a = Fraction(a)
    if a not in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 6)):
        raise ValueError("a must be one of 1/2, 1/3, 1/4, 1/6")
    if D < 2:
        raise ValueError("need D >= 2")
    u = hyper_u(a, D)
    lhs_terms: dict = {}
    for n in range(D + 1):
        # P_n(x) expanded exactly; term x^k t^n has total degree k + n
        pn = [Fraction(0)] * (n + 1)
        for m in range(n + 1):
            # sum_m C(n,m)^2 ((x-1)/2)^m ((x+1)/2)^(n-m): expand binomially
            base = Fraction(comb(n, m) ** 2, 2 ** n)
            for i in range(m + 1):
                for j in range(n - m + 1):
                    pn[i + j] += base * comb(m, i) * comb(n - m, j) * (-1) ** (m - i)
        for k in range(n + 1):
            if pn[k] and k + n <= D:
                lhs_terms[(k, n)] = lhs_terms.get((k, n), Fraction(0)) + u[n] * pn[k]
    lhs = BiSeries.from_terms(D, lhs_terms)

    # rho = sqrt(1 - w), w = 2xt - t^2 (total degree >= 2)
    w = BiSeries.from_terms(D, {(1, 1): 2, (0, 2): -1})
    rho = BiSeries.const(D, 1)
    p = BiSeries.const(D, 1)
    binom = Fraction(1)
    for k in range(1, D // 2 + 1):
        binom *= Fraction(3 - 2 * k, 2 * k)     # C(1/2, k)
        p = p * w
        rho = rho + binom * (-1) ** k * p       # C(1/2,k) (-w)^k
    t_series = BiSeries.from_terms(D, {(0, 1): 1})
    z1 = (BiSeries.const(D, 1) - t_series - rho) * Fraction(1, 2)
    z2 = (BiSeries.const(D, 1) + t_series - rho) * Fraction(1, 2)
    rhs = _f21_series(a, z1) * _f21_series(a, z2)

    bad = (lhs - rhs).first_nonzero()
    return bad is None, bad


def legendre_vs_tn_identity(n: int, x) -> bool:
    """P_n(x) == T_n(x, (x^2-1)/4), an exact cross-check."""
    from .sequences import tn
    x = Fraction(x)
    return legendre(n, x) == tn(n, x, (x * x - 1) / 4)
