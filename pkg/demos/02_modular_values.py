#!/usr/bin/env python3
"""The modular layer: eta products, theta constants, and the bimodular
pair (x, y, F) evaluated at arbitrary precision.
"""

from fractions import Fraction

from piseries import sporadic_case, hyper_case, eta, eta_multiplier
from piseries.bigfloat import ctx, to_mpc, recognize_rational
from piseries.modular import (bimodular_xyF, check_transform,
                              double_series_residual, eta_transform_defect,
                              theta_eisenstein, borwein_abc)
from piseries.quadfield import QuadNum

P = 192

# --- eta and its multiplier system ----------------------------------------
tau = to_mpc((0.31, 0.87), P)
print("eta(0.31 + 0.87i) =", eta(tau, 96))
k, gamma = eta_multiplier(2, -1, 5, -2)
print(f"multiplier of {gamma}: zeta_24^{k}")
print("transformation defect:", float(eta_transform_defect((2, 1, 5, 3), tau, P)))

# --- theta constants --------------------------------------------------------
with ctx(P):
    t2 = theta_eisenstein("theta2", tau, P)
    t3 = theta_eisenstein("theta3", tau, P)
    t4 = theta_eisenstein("theta4", tau, P)
    print("\n|theta2^4 + theta4^4 - theta3^4| =", float(abs(t2**4 + t4**4 - t3**4)))
    a, b, c = borwein_abc(tau, P)
    print("|a^3 - b^3 - c^3| (cubic theta) =", float(abs(a**3 - b**3 - c**3)))

# --- bimodular x, y, F at a CM pair ----------------------------------------
# the points (-3+sqrt(-3))/6 and sqrt(-3)/6 for the (-17,-6,72) family
case = sporadic_case(-17, -6, 72)
tau1 = QuadNum(-3, Fraction(-1, 2), Fraction(1, 6))
tau2 = QuadNum(-3, 0, Fraction(1, 6))
vals = bimodular_xyF(case, tau1, tau2, P)
tol = Fraction(1, 10 ** 40)
print("\nCM pair for (-17,-6,72):")
print("  t1 =", recognize_rational(vals.t1, 10 ** 6, tol))
print("  x  =", recognize_rational(vals.x, 10 ** 6, tol))
print("  y  =", recognize_rational(vals.y, 10 ** 6, tol))

# --- F equals the double series where it converges -------------------------
tau1n = to_mpc((0.1, 1.2), P)
tau2n = to_mpc((-0.15, 1.5), P)
res = double_series_residual(case, tau1n, tau2n, P)
print("\n|F - double series| at a generic pair:", float(res))

# --- transformation laws ----------------------------------------------------
print("\nnormalizer transformation checks (residual, character):")
for case in (sporadic_case(7, 2, -8), sporadic_case(11, 3, -1), hyper_case("1/3")):
    for tag in case.normalizers:
        r, chi = check_transform(case, tag, tau1n, tau2n, P)
        print(f"  {case!r} {tag}: residual {float(r):.2e}, chi2 = {chi:+d}")
