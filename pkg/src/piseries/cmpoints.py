"""CM points on the genus-zero curves in play, as integral binary
quadratic forms [A, B, C] with N | A (and 5 | B in the level-5 optimal
case), up to the exact congruence-group equivalence.

Equivalence is decided exactly: a form is carried to the SL(2,Z)-reduced
representative with its reducing matrix, and two forms are in the same
class iff the reduced forms agree and the reducing matrices land in the
same coset of the group, up to an automorph of the reduced form.  The
coset of Gamma_0(N) is read off the bottom row mod N in P^1(Z/N), so one
class key costs a handful of integer operations; no numerics involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .cases import SeriesCase
from .quadfield import Mat, QuadNum, mat_adj, mat_mul

# ---------------------------------------------------------------------------
# forms and reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class QuadForm:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def content(self) -> int:
        return gcd(gcd(self.A, self.B), self.C)

    def apply(self, g: Mat) -> "QuadForm":
        """Right action Q(x, y) -> Q(p x + q y, r x + s y)."""
        p, q, r, s = g
        A, B, C = self.A, self.B, self.C
        return QuadForm(
            A * p * p + B * p * r + C * r * r,
            2 * A * p * q + B * (p * s + q * r) + 2 * C * r * s,
            A * q * q + B * q * s + C * s * s,
        )

    def tau(self) -> QuadNum:
        """(-B + sqrt(d)) / (2A) in Q(sqrt(d))."""
        return QuadNum(self.disc, Fraction(-self.B, 2 * self.A),
                       Fraction(1, 2 * self.A))

    def conjugate(self) -> "QuadForm":
        return QuadForm(self.A, -self.B, self.C)

    def translate_normalized(self) -> "QuadForm":
        """Representative with B in (-A, A] (translation only)."""
        A, B, C = self.A, self.B, self.C
        k = (A - B) // (2 * A)
        B2 = B + 2 * A * k
        return QuadForm(A, B2, A * k * k + B * k + C)

    def __str__(self):
        return f"[{self.A},{self.B},{self.C}]"


def is_discriminant(d: int) -> bool:
    return d < 0 and d % 4 in (0, 1)


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def fundamental_decomp(d: int) -> tuple[int, int]:
    """d = r^2 d0 with d0 a fundamental discriminant; returns (d0, r)."""
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    for r in range(isqrt(abs(d)), 0, -1):
        if d % (r * r):
            continue
        d0 = d // (r * r)
        if d0 % 4 == 1 and all(e < 2 for e in factorize(d0).values()):
            return d0, r
        if d0 % 4 == 0:
            m = d0 // 4
            if m % 4 in (2, 3) and all(e < 2 for e in factorize(m).values()):
                return d0, r
    raise AssertionError(d)


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol (d/p) for prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    dd = d % p
    if dd == 0:
        return 0
    return 1 if pow(dd, (p - 1) // 2, p) == 1 else -1


def reduced_forms(d: int, primitive: bool = True) -> list[QuadForm]:
    """All reduced forms of discriminant d (primitive ones by default)."""
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    out = []
    b = abs(d) % 2
    while 3 * b * b <= abs(d):
        m4 = b * b - d
        if m4 % 4 == 0:
            m = m4 // 4
            a = max(b, 1)
            while a * a <= m:
                if m % a == 0:
                    c = m // a
                    if primitive and gcd(gcd(a, b), c) != 1:
                        a += 1
                        continue
                    out.append(QuadForm(a, b, c))
                    if 0 < b < a < c:
                        out.append(QuadForm(a, -b, c))
                a += 1
        b += 2
    return sorted(out)


def class_number(d: int) -> int:
    return len(reduced_forms(d))


def class_forms(d: int) -> list[QuadForm]:
    """One primitive reduced form per class (h(d) of them)."""
    return reduced_forms(d, primitive=True)


def all_reduced_forms(d: int) -> list[QuadForm]:
    """Reduced forms of disc d of every content g (g^2 | d)."""
    out = []
    g = 1
    while g * g <= abs(d):
        if d % (g * g) == 0 and (d // (g * g)) % 4 in (0, 1):
            for f in reduced_forms(d // (g * g), primitive=True):
                out.append(QuadForm(g * f.A, g * f.B, g * f.C))
        g += 1
    return out


def reduce_form(Q: QuadForm) -> tuple[QuadForm, Mat]:
    """(R, g) with Q.apply(g) = R reduced: |B| <= A <= C, B >= 0 if
    |B| = A or A = C."""
    if Q.A <= 0 or Q.disc >= 0:
        raise ValueError("form must be positive definite")
    g: Mat = (1, 0, 0, 1)
    A, B, C = Q.A, Q.B, Q.C
    while True:
        k = (A - B) // (2 * A)
        if k:
            B, C = B + 2 * A * k, A * k * k + B * k + C
            g = mat_mul(g, (1, k, 0, 1))
        if A > C or (A == C and B < 0):
            A, B, C = C, -B, A
            g = mat_mul(g, (0, -1, 1, 0))
            continue
        if B == -A:
            B, C = B + 2 * A, A + B + C  # k = 1 using old B
            g = mat_mul(g, (1, 1, 0, 1))
        break
    return QuadForm(A, B, C), g


def automorphs(R: QuadForm) -> list[Mat]:
    """Matrices M (including -I) with R.apply(M) = R."""
    g0 = R.content()
    A0, B0, C0 = R.A // g0, R.B // g0, R.C // g0
    d0 = B0 * B0 - 4 * A0 * C0
    pairs = [(2, 0), (-2, 0)]
    if d0 == -4:
        pairs += [(0, 1), (0, -1)]
    elif d0 == -3:
        pairs += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    mats = []
    for t, v in pairs:
        mats.append((
            (t - B0 * v) // 2, -C0 * v, A0 * v, (t + B0 * v) // 2,
        ))
    return mats


# ---------------------------------------------------------------------------
# congruence-group class keys
# ---------------------------------------------------------------------------

def _p1_label(c: int, d: int, N: int) -> tuple[int, int]:
    """Canonical representative of (c : d) in P^1(Z/N)."""
    c, d = c % N, d % N
    best = None
    for u in range(1, N):
        if gcd(u, N) != 1:
            continue
        cand = ((u * c) % N, (u * d) % N)
        if best is None or cand < best:
            best = cand
    return best


def _pm_label(c: int, d: int, N: int) -> tuple[int, int]:
    """(c, d) mod N up to overall sign (for Gamma_1(N) classes)."""
    c, d = c % N, d % N
    return min((c, d), ((-c) % N, (-d) % N))


def class_key(Q: QuadForm, N: int, gamma1: bool = False):
    """Exact class invariant under Gamma_0(N) (or +-Gamma_1(5))."""
    R, g = reduce_form(Q)
    label = _pm_label if gamma1 else _p1_label
    best = None
    for sig in automorphs(R):
        m = mat_mul(g, sig)
        lab = label(m[2], m[3], N)
        if best is None or lab < best:
            best = lab
    return (R.A, R.B, R.C, best)


def equivalent(Q1: QuadForm, Q2: QuadForm, N: int, gamma1: bool = False) -> bool:
    return class_key(Q1, N, gamma1) == class_key(Q2, N, gamma1)


# ---------------------------------------------------------------------------
# optimality (level-primitivity) and enumeration
# ---------------------------------------------------------------------------

def _optimal_gamma0(Q: QuadForm, N: int) -> bool:
    return Q.A % N == 0 and gcd(gcd(Q.A // N, Q.B), Q.C) == 1


def _optimal_gamma1_5(Q: QuadForm) -> bool:
    if Q.A % 5 or Q.B % 5:
        return False
    g = gcd(gcd(Q.A, Q.B), Q.C)
    for p in factorize(g):
        if p != 5:
            return False
        if Q.A % 25 == 0 and Q.B % 25 == 0:
            return False
    return True


def _is_optimal(Q: QuadForm, N: int, gamma1: bool) -> bool:
    if gamma1:
        return _optimal_gamma1_5(Q)
    return _optimal_gamma0(Q, N)


def _coset_reps(N: int, gamma1: bool) -> list[Mat]:
    """Matrices g_j whose classes Gamma g_j cover Gamma \\ SL(2,Z)."""
    label = _pm_label if gamma1 else _p1_label
    seen = {}
    for c in range(N):
        for d in range(N):
            if gcd(gcd(c, d), N) != 1:
                continue
            lab = label(c, d, N)
            if lab in seen:
                continue
            # lift (c, d) to a coprime integer pair, then complete
            cc, dd = (c if c else N), d
            while gcd(cc, dd) != 1:
                dd += N
            # solve a*dd - b*cc = 1
            g0, x, y = _xgcd(dd, cc)
            a, b = x, -y
            seen[lab] = (a, b, cc, dd)
    return list(seen.values())


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    return old_r, old_s, old_t


def cm_class_keys(N: int, d: int, gamma1: bool) -> set:
    """Exact class keys of all CM points of discriminant d; complete by
    construction (reduced forms composed with coset representatives)."""
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    keys = set()
    for R in all_reduced_forms(d):
        for g in _coset_reps(N, gamma1):
            Q = R.apply(mat_adj(g))
            if _is_optimal(Q, N, gamma1):
                keys.add(class_key(Q, N, gamma1))
    return keys


def cm_count(N: int, d: int, gamma1: bool | None = None) -> int:
    if gamma1 is None:
        gamma1 = (N == 5)
    return len(cm_class_keys(N, d, gamma1))


def cm_points(N: int, d: int, gamma1: bool | None = None) -> list[QuadForm]:
    """Complete set of inequivalent optimal forms [A, B, C], N | A, of
    discriminant d, each as its minimal representative (smallest A, then
    smallest |B| with B in (-A, A], preferring B >= 0), which is how the
    published lists are normalized.

    gamma1 defaults to True for N = 5 (the level-5 case lives on the
    Gamma_1(5) curve).
    """
    if gamma1 is None:
        gamma1 = (N == 5)
    keys = cm_class_keys(N, d, gamma1)
    found: dict = {}
    A = N
    cap = max(4 * abs(d), 4 * N * N * (isqrt(abs(d)) + 1))
    while len(found) < len(keys) and A <= cap:
        for babs in range(A + 1):
            signs = (babs,) if babs in (0, A) else (babs, -babs)
            for B in signs:
                if (B * B - d) % (4 * A):
                    continue
                Q = QuadForm(A, B, (B * B - d) // (4 * A))
                if not _is_optimal(Q, N, gamma1):
                    continue
                k = class_key(Q, N, gamma1)
                if k in keys and k not in found:
                    found[k] = Q
        A += N
    if len(found) < len(keys):
        raise AssertionError(f"missing representatives for d={d}, N={N}")
    return sorted(found.values(), key=lambda q: (q.A, abs(q.B), q.B < 0))


def ogg_count(d: int) -> int:
    """|CM(d)| on the level-6 curve: h(d) * nu_2(d) * nu_3(d)."""
    d0, r = fundamental_decomp(d)
    n = class_number(d)
    for p in (2, 3):
        if r % p == 0:
            n *= 2
        else:
            n *= 1 + kronecker(d, p)
    return n


# ---------------------------------------------------------------------------
# normalizer actions
# ---------------------------------------------------------------------------

def atkin_lehner_matrix(N: int, m: int) -> Mat:
    """A determinant-m representative of w_m for an exact divisor m of N."""
    if N % m or gcd(m, N // m) != 1:
        raise ValueError(f"{m} is not an exact divisor of {N}")
    if m == N:
        return (0, -1, N, 0)
    if m == 1:
        return (1, 0, 0, 1)
    x = pow(m, -1, N // m)
    b = (m * m * x - m) // N
    return (m * x, b, N, m)


def act_on_form(Q: QuadForm, W: Mat, N: int, gamma1: bool = False) -> QuadForm:
    """Optimal form of the moved point W(tau_Q).

    The pullback Q.apply(adj(W)) has discriminant det(W)^2 d; the result
    is its primitive part rescaled by the least k making it optimal at
    level N (the discriminant may legitimately change for the extra
    normalizers that do not preserve the matrix order).
    """
    Q2 = Q.apply(mat_adj(W))
    if Q2.A < 0:
        Q2 = QuadForm(-Q2.A, -Q2.B, -Q2.C)
    g = Q2.content()
    Q0 = QuadForm(Q2.A // g, Q2.B // g, Q2.C // g)
    for k in range(1, N * N + 1):
        Qk = QuadForm(k * Q0.A, k * Q0.B, k * Q0.C)
        if _is_optimal(Qk, N, gamma1):
            return Qk.translate_normalized()
    raise ValueError(f"image of {Q} under {W} admits no optimal rescaling")


def atkin_lehner(N: int, Q: QuadForm, m) -> QuadForm:
    """Action of w_m (m an exact divisor of N) or of an explicit
    normalizer matrix on a CM form."""
    W = m if isinstance(m, tuple) else atkin_lehner_matrix(N, m)
    return act_on_form(Q, W, N, gamma1=(N == 5))


# ---------------------------------------------------------------------------
# Galois-orbit classification at levels 8 and 9
# ---------------------------------------------------------------------------

def classify_orbit(N: int, Q: QuadForm) -> str:
    """Congruence-class label of the Galois orbit of a CM form, per the
    level-8 and level-9 case analyses."""
    d = Q.disc
    d0, r = fundamental_decomp(d)
    B, C = Q.B, Q.C
    if N == 8:
        if (d0 % 8 == 5 and r % 4) or (d0 % 4 == 0 and r % 2):
            raise ValueError(f"no CM points for d = {d} at level 8")
        if d % 8 == 1:
            b = next(b for b in range(1, 32) if (b * b - d) % 32 == 0)
            if (B - b) % 16 == 0:
                return "O+"
            if (B + b) % 16 == 0:
                return "O-"
            raise AssertionError((Q, b))
        if d0 % 8 == 1 and r % 4 == 2:
            b1 = next(b for b in range(1, 16) if (b * b - d0) % 16 == 8)
            b2 = next(b for b in range(1, 16) if (b * b - d0) % 16 == 0)
            if (B - 2 * b1) % 16 == 0:
                return "C1"
            if (B + 2 * b1) % 16 == 0:
                return "C2"
            if (B - 2 * b2) % 16 == 0:
                return "C3" if C % 2 == 0 else "C4"
            if (B + 2 * b2) % 16 == 0:
                return "C5" if C % 2 == 0 else "C6"
            raise AssertionError((Q, b1, b2))
        if d0 % 2 and r % 8 == 4:
            if B % 16 == 4:
                return "C1" if C % 2 == 0 else "C2"
            if B % 16 == 12:
                return "C3" if C % 2 == 0 else "C4"
            raise AssertionError(Q)
        if d0 % 8 == 4 and r % 4 == 2:
            return "O+" if B % 16 == 4 else "O-"
        if d0 % 8 == 0 and r % 4 == 2:
            return "O0" if B % 16 == 0 else "O8"
        if d % 64 == 0:
            if B % 16 == 0:
                return "C1" if C % 2 == 0 else "C2"
            return "C3" if C % 2 == 0 else "C4"
        raise ValueError(f"discriminant {d} outside the classified cases")
    if N == 9:
        if d0 % 3 != 1 and r % 3:
            raise ValueError(f"no CM points for d = {d} at level 9")
        if d0 % 3 == 1 and r % 3:
            b = next(b for b in range(1, 9) if (b * b - d) % 9 == 0)
            if (B - b) % 9 == 0:
                return "O+"
            if (B + b) % 9 == 0:
                return "O-"
            raise AssertionError((Q, b))
        if d % 27 == 0:
            if B % 9 == 3:
                return "C1"
            if B % 9 == 6:
                return "C2"
            return "C3" if C % 3 else "C4"
        if d0 % 3 == 1:  # 3 || r
            if B % 9 == 3:
                return "C1" if C % 3 else "C2"
            if B % 9 == 6:
                return "C3" if C % 3 else "C4"
            return "C5"
        # d0 = 2 mod 3, 3 || r
        if B % 9 == 3:
            return "C1"
        if B % 9 == 6:
            return "C2"
        return "C3"
    raise ValueError("orbit classification is available for levels 8 and 9")


# ---------------------------------------------------------------------------
# embeddings and the CM pair search
# ---------------------------------------------------------------------------

def tau_alpha(Q: QuadForm) -> tuple[QuadNum, Mat]:
    """CM point and normalized embedding matrix (-B, -2C; 2A, B)."""
    alpha: Mat = (-Q.B, -2 * Q.C, 2 * Q.A, Q.B)
    return Q.tau(), alpha


class PairNotFound(Exception):
    pass


def iter_cm_pairs(case: SeriesCase, discs, x_target: Fraction,
                  y_target: Fraction, P: int = 160):
    """Yield CM pairs (Q1, Q2) realizing a row's exact (x, y).

    With a single input discriminant the scan also covers the 4d and
    d/4 companion discriminants (the extra normalizers move points
    between those sets)."""
    from .modular import case_t_value, xy_from_t
    from .bigfloat import ctx, to_mpfr

    if isinstance(discs, int):
        discs = (discs,)
    N = case.level
    gamma1 = (case.label == "1131")

    def points(d):
        if not is_discriminant(d):
            return []
        out = []
        for Q in cm_points(N, d, gamma1):
            t = case_t_value(case, Q.tau(), P)
            out.append((Q, t))
        return out

    if len(discs) == 2:
        scan = [(discs[0], discs[1]), (4 * discs[0], 4 * discs[1])]
    else:
        d = discs[0]
        scan = [(d, d), (d, 4 * d), (4 * d, d)]
        if d % 4 == 0:
            scan += [(d, d // 4), (d // 4, d)]
        scan += [(4 * d, 4 * d)]
    tol = Fraction(1, 10 ** 20)
    with ctx(P):
        xt = to_mpfr(x_target, P)
        yt = to_mpfr(y_target, P)
        for d1, d2 in scan:
            pts1 = points(d1)
            pts2 = points(d2) if d2 != d1 else pts1
            for Q1, t1 in pts1:
                for Q2, t2 in pts2:
                    try:
                        x, y = xy_from_t(case, t1, t2)
                    except ZeroDivisionError:
                        continue
                    if abs(x - xt) < tol and abs(y - yt) < tol:
                        yield Q1, Q2


def find_cm_pair(case: SeriesCase, discs, x_target: Fraction,
                 y_target: Fraction, P: int = 160, validate: bool = True):
    """First CM pair realizing (x_target, y_target); see iter_cm_pairs.

    When the double series converges at (x, y), candidate pairs are
    validated against it (the hauptmodul values only determine the pair
    up to normalizer symmetries, and at a few pairs the analytically
    continued series picks up a monodromy factor; the constants are only
    valid at a pair where F equals the series).  Falls back to the first
    pair if none validates or the series diverges there."""
    from .modular import bimodular_xyF
    from .series_eval import (SlowConvergence, inner_growth_rate,
                              eval_weighted_series, u_term_iter)
    from .bigfloat import ctx

    first = None
    ratio = (abs(float(x_target)) * case.growth_bound()
             * inner_growth_rate(y_target))
    for Q1, Q2 in iter_cm_pairs(case, discs, x_target, y_target, P):
        if first is None:
            first = (Q1, Q2)
        if not validate or not ratio < 0.97:
            return Q1, Q2
        try:
            with ctx(96):
                vals = bimodular_xyF(case, Q1.tau(), Q2.tau(), 96)
                S, _, _ = eval_weighted_series(
                    u_term_iter(case, 120), vals.x, vals.y, 96,
                    weight=(0, 1), kind="n", growth=case.growth_bound(),
                    max_terms=20_000, name="pair-validate")
                if abs(S - vals.F) < abs(vals.F) * 1e-10:
                    return Q1, Q2
        except (SlowConvergence, ValueError):
            return Q1, Q2
    if first is not None:
        return first
    raise PairNotFound(
        f"no CM pair for case {case.label}, d={discs}, x={x_target}, y={y_target}")
