#!/usr/bin/env python3
"""The two-parameter family of special Liouville metrics.

For parameters (b, c1, c2) the conformal factor solving

    lambda'^2 = -c1 + c2 lambda^2 + 2 b^2 lambda^4

is lambda(u) = sqrt(lambda_plus) / cn(s u, k).  This script derives the
constants for the reference member b = 1/sqrt(6), c1 = 1, c2 = -11/6,
tabulates lambda and the Gaussian curvature, and confirms the first
integral to machine precision.
"""

import math

import numpy as np

from ricci_liouville import (
    MetricParams,
    conformal_factor,
    conformal_factor_derivatives,
    derive_constants,
    gaussian_curvature,
    ode_residual,
)

p = MetricParams(b=1.0 / math.sqrt(6.0), c1=1.0, c2=-11.0 / 6.0)
dc = derive_constants(p)

print("Reference member (b, c1, c2) =", (round(p.b, 6), p.c1, round(p.c2, 6)))
print(f"  discriminant c2^2 + 8 b^2 c1 = {dc.disc:.12f}  (sqrt = {math.sqrt(dc.disc):.12f} = 13/6)")
print(f"  modulus k^2   = {dc.k.k2:.12f}  (1/13)")
print(f"  lambda_plus   = {dc.lambda_plus:.12f}")
print(f"  lambda_minus  = {dc.lambda_minus:.12f}")
print(f"  scaling s     = {dc.s:.12f}")
print(f"  domain        = (-{dc.u_max:.12f}, {dc.u_max:.12f})")

print("\nConformal factor and curvature:")
print(f"{'u':>8} {'lambda':>12} {'lambda_prime':>14} {'K':>12}")
for u in np.linspace(0.0, 0.9 * dc.u_max, 10):
    lam, dlam, _ = conformal_factor_derivatives(p, u)
    print(f"{u:8.4f} {lam:12.6f} {dlam:14.6f} {gaussian_curvature(p, u):12.8f}")
print("lambda has its minimum sqrt(lambda_plus) at u = 0 and a pole at the boundary;")
print(f"K stays strictly below -2 b^2 = {-2 * p.b**2:.6f} and approaches it outward.")

u = np.linspace(-0.95 * dc.u_max, 0.95 * dc.u_max, 400)
lam = conformal_factor(p, u)
res = ode_residual(p, u)
print(f"\nFirst integral residual over 95% of the domain:")
print(f"  max |residual| / max(1, lambda^4) = {np.max(np.abs(res) / np.maximum(1, lam**4)):.2e}")

print("\nConstancy of lambda^4 (-2 b^2 - K):")
curv = gaussian_curvature(p, u)
print(f"  range = [{np.min(lam**4 * (-2 * p.b**2 - curv)):.15f}, "
      f"{np.max(lam**4 * (-2 * p.b**2 - curv)):.15f}]  (should be c1 = 1)")
