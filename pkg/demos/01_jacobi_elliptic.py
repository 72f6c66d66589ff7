#!/usr/bin/env python3
"""Jacobi elliptic functions: quarter period, amplitude, sn/cn/dn.

Walks through the building blocks the metric construction rests on and
checks the textbook identities numerically.
"""

import numpy as np

from ricci_liouville import Modulus, complete_elliptic_k, jacobi_am, jacobi_sn_cn_dn

print("Quarter period K(k) by the arithmetic-geometric mean")
print(f"{'k':>6} {'K(k)':>20}")
for k in (0.0, 0.25, 0.5, 0.75, 0.9, 0.99):
    print(f"{k:6.2f} {complete_elliptic_k(k):20.15f}")
print("K(0) = pi/2, and K grows without bound as k -> 1.\n")

k = Modulus(0.6)
quarter = complete_elliptic_k(k)
u = np.linspace(-2.0 * quarter, 2.0 * quarter, 9)
sn, cn, dn = jacobi_sn_cn_dn(u, k)
am = jacobi_am(u, k)

print(f"Samples at k = {k.k} (K = {quarter:.6f})")
print(f"{'u':>9} {'am':>10} {'sn':>10} {'cn':>10} {'dn':>10}")
for row in zip(u, am, sn, cn, dn):
    print("".join(f"{v:10.5f}" for v in row))

print("\nIdentities on a dense grid:")
u = np.linspace(-3.0 * quarter, 3.0 * quarter, 2001)
sn, cn, dn = jacobi_sn_cn_dn(u, k)
print(f"  max |sn^2 + cn^2 - 1|       = {np.max(np.abs(sn**2 + cn**2 - 1)):.2e}")
print(f"  max |dn^2 + k^2 sn^2 - 1|   = {np.max(np.abs(dn**2 + k.k2 * sn**2 - 1)):.2e}")
_, cn_shift, _ = jacobi_sn_cn_dn(u + 4.0 * quarter, k)
print(f"  max |cn(u + 4K) - cn(u)|    = {np.max(np.abs(cn_shift - cn)):.2e}")

h = 1e-5
mid = jacobi_am(u[::50] + h, k) - jacobi_am(u[::50] - h, k)
_, _, dn_mid = jacobi_sn_cn_dn(u[::50], k)
print(f"  max |d(am)/du - dn| (h=1e-5) = {np.max(np.abs(mid / (2 * h) - dn_mid)):.2e}")

print("\nLimiting moduli:")
print(f"  am(1.3, 0) = {jacobi_am(1.3, 0.0):.12f}  (equals u)")
sn1, cn1, dn1 = jacobi_sn_cn_dn(1.0, 1.0)
print(f"  cn(1, 1)   = {cn1:.12f}  (sech 1 = {1 / np.cosh(1.0):.12f})")
