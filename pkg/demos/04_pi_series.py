#!/usr/bin/env python3
"""End to end: from a CM pair to a verified 1/pi series.

The worked example: for the (-17,-6,72) family and discriminant -420,

    sum_n sum_m u_n C(n,2m) C(2m,m) (5n - 2) (-71/1008)^n (1/142^2)^m
        = 3 sqrt(35) / pi.
"""

import gmpy2

from piseries import sporadic_case, QuadForm, pi_const
from piseries.bigfloat import ctx, recognize_rational
from piseries.cmconstants import case_at_cm, theorem_constants
from piseries.tables import load_builtin
from piseries.verify import verify_row, rederive_row, eval_series

P = 192
case = sporadic_case(-17, -6, 72)
Q1, Q2 = QuadForm(6, 6, 19), QuadForm(30, 30, 11)

# --- the analytic constants at the CM pair ----------------------------------
cc = case_at_cm(case, Q1, Q2, P)
B1, C1, B2, C2 = theorem_constants(cc, P)
from fractions import Fraction
print("B1 =", recognize_rational(B1, 10 ** 6, Fraction(1, 10 ** 40)))
with ctx(P):
    print("C1 =", C1.real)
    print("C1 / sqrt(35) =", recognize_rational(
        C1 / gmpy2.sqrt(gmpy2.mpfr(35)), 10 ** 6, Fraction(1, 10 ** 40)))

# so (n - 2/5) sums to (3 sqrt(35)/5)/pi, i.e. (5n - 2) sums to 3 sqrt(35)/pi

# --- summing the series ------------------------------------------------------
rows = {r.id: r for r in load_builtin("all")}
row = rows["17672-420a"]
value, terms, tail = eval_series(row, P)
with ctx(P):
    target = 3 * gmpy2.sqrt(gmpy2.mpfr(35)) / pi_const(P)
    print(f"\nseries value   = {value.real}")
    print(f"3 sqrt(35)/pi  = {target}")
    print(f"difference     = {float(abs(value - target)):.3e} "
          f"({terms} terms, certified tail {float(tail):.3e})")

# --- the full pipeline on a handful of rows ----------------------------------
print("\nverify + re-derive a few rows:")
for rid in ("728-96a", "1039-240a", "9327-1008a", "1131-760a",
            "h2-192a", "h3-72a", "h4-84a"):
    rep = verify_row(rows[rid])
    red = rederive_row(rows[rid])
    print(f"  {rid:12s} verify: {rep.status} (err {rep.error:.1e}), "
          f"constants re-derived from pair {red.pair}: {red.status}")
