#!/usr/bin/env python3
"""The exact layer: recurrences, closed forms, and the formal identities.

Everything in this demo is computed in exact rational arithmetic; a
check either holds coefficient by coefficient or names the first
failing coefficient.
"""

from fractions import Fraction

from piseries import (apery_seq, apery_closed, sporadic_case, hyper_case,
                      tn, legendre, wz_check, pde_residual, pde_systems,
                      brafman_check)

# --- the six recurrence families ------------------------------------------
# (n+1)^2 u_{n+1} = (a n^2 + a n + b) u_n - c n^2 u_{n-1},  u_0 = 1
for abc in [(7, 2, -8), (10, 3, 9), (-17, -6, 72),
            (12, 4, 32), (-9, -3, 27), (11, 3, -1)]:
    case = sporadic_case(*abc)
    seq = apery_seq(case, 8)
    closed = [apery_closed(case, n) for n in range(9)]
    assert [int(v) for v in seq] == closed
    print(f"{abc}: u_0..u_8 = {closed}")

# the same recurrence with (a, b, c) = (1, a(1-a), 0) gives the
# hypergeometric weights (a)_n (1-a)_n / (n!)^2
print("\na=1/2 weights:", apery_seq(hyper_case("1/2"), 4))

# --- T_n and Legendre polynomials -----------------------------------------
# T_n(b, c) is the coefficient of z^n in (z^2 + b z + c)^n, and
# P_n(x) = T_n(x, (x^2-1)/4)
print("\nT_2(34, 1) =", tn(2, 34, 1))
x = Fraction(3, 2)
assert legendre(5, x) == tn(5, x, (x * x - 1) / 4)
print("P_5(3/2) =", legendre(5, x))

# --- the two-variable product identity ------------------------------------
# sum_n u_n sum_m C(2m,m) C(n,2m) x^n y^m = (1-cXY)(sum u_n X^n)(sum u_n Y^n)
# under the algebraic change of variables (X, Y) -> (x, y)
print()
for abc in [(7, 2, -8), (10, 3, 9), (-17, -6, 72),
            (12, 4, 32), (-9, -3, 27), (11, 3, -1)]:
    ok, bad = wz_check(sporadic_case(*abc), 8)
    print(f"product identity {abc} through total degree 8:",
          "exact" if ok else f"FAILS at {bad}")

# --- the PDE systems -------------------------------------------------------
# each double series is annihilated by an explicit pair of partial
# differential operators in theta_x, theta_y
print()
for name in pde_systems():
    ok, trusted, _ = pde_residual(name, 10)
    print(f"PDE system {name:16s} residual zero through degree {trusted}:",
          "yes" if ok else "NO")

# --- Brafman's generating function ----------------------------------------
print()
for a in ("1/2", "1/3", "1/4", "1/6"):
    ok, _ = brafman_check(a, 8)
    print(f"Brafman product formula, a = {a}: {'exact' if ok else 'FAILS'}")
