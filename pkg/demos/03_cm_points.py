#!/usr/bin/env python3
"""The arithmetic layer: CM points as quadratic forms, normalizer
actions, Galois-orbit labels, and rational (x, y) values.
"""

from fractions import Fraction

from piseries import (QuadForm, class_number, cm_points, atkin_lehner,
                      classify_orbit, ogg_count, sporadic_case)
from piseries.bigfloat import ctx, recognize_rational
from piseries.cmpoints import cm_count, equivalent, find_cm_pair
from piseries.modular import case_t_value, xy_from_t

# --- counting CM points -----------------------------------------------------
print("h(-420) =", class_number(-420))
print("|CM(-420)| at level 6 =", cm_count(6, -420), "(product formula:",
      ogg_count(-420), ")")

pts = cm_points(6, -420)
print("\nthe eight classes of discriminant -420 at level 6:")
for q in pts:
    print(" ", q)

# --- the Klein four-group of involutions ------------------------------------
q1 = pts[0]
for m in (2, 3, 6):
    img = atkin_lehner(6, q1, m)
    j = next(i for i, p in enumerate(pts) if equivalent(img, p, 6))
    print(f"w_{m} sends {q1} to class #{j + 1} ({pts[j]})")

# --- orbit labels at levels 8 and 9 ------------------------------------------
print("\nGalois-orbit labels, level 8, d = -112:")
for q in cm_points(8, -112):
    print(f"  {q}: {classify_orbit(8, q)}")

# --- rational (x, y) from a CM pair ------------------------------------------
case = sporadic_case(-17, -6, 72)
P = 220
with ctx(P):
    t1 = case_t_value(case, QuadForm(6, 6, 19).tau(), P)
    t2 = case_t_value(case, QuadForm(30, 30, 11).tau(), P)
    x, y = xy_from_t(case, t1, t2)
    tol = Fraction(1, 10 ** 50)
    print("\n(x, y) at the [6,6,19], [30,30,11] pair of discriminant -420:")
    print("  x =", recognize_rational(x, 10 ** 9, tol))
    print("  y =", recognize_rational(y, 10 ** 9, tol))

# and the search in the other direction: given (x, y), find the pair
Q1, Q2 = find_cm_pair(case, -420, Fraction(-71, 1008), Fraction(1, 142 ** 2))
print("find_cm_pair(-71/1008, 1/142^2) ->", Q1, Q2)
