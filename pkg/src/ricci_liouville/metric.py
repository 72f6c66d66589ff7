"""Closed-form family of special Liouville metrics lambda(u)^2 (du^2 + dv^2).

The conformal factor solves

    lambda'^2 = -c1 + c2 lambda^2 + 2 b^2 lambda^4,   c1 > 0, b > 0,

whose bounded-below solution branch is lambda(u) = sqrt(lambda_plus) / cn(s u, k)
with s = (c2^2 + 8 b^2 c1)^(1/4) and the modulus fixed by the same constants.
The Gaussian curvature of these metrics satisfies
lambda^4 (-2 b^2 - K) = c1, hence K < -2 b^2 everywhere.

The metric lives on the open interval |u| < u_max = K(k)/s centred at the
minimum of lambda; evaluation functions raise DomainError at or beyond the
pole of cn.  All functions are pure and accept scalar or ndarray ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import Modulus, complete_elliptic_k, jacobi_am, jacobi_sn_cn_dn
from .errors import DomainError, ParameterError

__all__ = [
    "MetricParams",
    "DerivedConstants",
    "derive_constants",
    "conformal_factor",
    "conformal_factor_derivatives",
    "gaussian_curvature",
    "theta",
    "ode_residual",
    "DEFAULT_EPS_DOM",
]

DEFAULT_EPS_DOM = 1e-9


@dataclass(frozen=True)
class MetricParams:
    """Generating triple (b, c1, c2) of one metric of the family.

    b is half the mean curvature norm of the associated immersions
    (|H| = 2b), c1 and c2 are the integration constants of the conformal
    factor ODE.  Requires b > 0 and c1 > 0.
    """

    b: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("b", "c1", "c2"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val!r}")
            object.__setattr__(self, name, val)
        if self.b <= 0.0:
            raise ParameterError("b must be positive")
        if self.c1 <= 0.0:
            raise ParameterError("c1 must be positive")


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from MetricParams.

    disc        = c2^2 + 8 b^2 c1              (positive discriminant)
    s           = disc^(1/4)                   (argument scaling)
    k           = modulus, k^2 = (c2 + sqrt(disc)) / (2 sqrt(disc))
    lambda_plus  = (-c2 + sqrt(disc)) / (4 b^2) > 0
    lambda_minus = (-c2 - sqrt(disc)) / (4 b^2) < 0
    u_max       = K(k) / s                     (half-width of the domain)
    """

    disc: float
    s: float
    k: Modulus
    lambda_plus: float
    lambda_minus: float
    u_max: float


@lru_cache(maxsize=256)
def derive_constants(p: MetricParams) -> DerivedConstants:
    """Compute the derived constants of the closed form for parameters p."""
    b2 = p.b * p.b
    disc = p.c2 * p.c2 + 8.0 * b2 * p.c1
    sqrt_disc = math.sqrt(disc)
    k2 = (p.c2 + sqrt_disc) / (2.0 * sqrt_disc)
    lam_p = (-p.c2 + sqrt_disc) / (4.0 * b2)
    lam_m = (-p.c2 - sqrt_disc) / (4.0 * b2)
    assert disc > p.c2 * p.c2, "discriminant must exceed c2^2 when c1 > 0"
    assert lam_p > 0.0 > lam_m, "root ordering lambda_plus > 0 > lambda_minus"
    assert 0.0 < k2 < 1.0, "modulus squared must lie strictly inside (0, 1)"
    # factorization 2 b^2 (t - lambda_plus)(t - lambda_minus) = 2 b^2 t^2 + c2 t - c1
    for t in (0.0, 1.0, lam_p):
        lhs = 2.0 * b2 * (t - lam_p) * (t - lam_m)
        rhs = 2.0 * b2 * t * t + p.c2 * t - p.c1
        scale = max(1.0, abs(lhs), abs(rhs))
        assert abs(lhs - rhs) <= 1e-10 * scale, "quartic factorization failed"
    k = Modulus(math.sqrt(k2))
    s = disc**0.25
    u_max = complete_elliptic_k(k) / s
    return DerivedConstants(
        disc=disc, s=s, k=k, lambda_plus=lam_p, lambda_minus=lam_m, u_max=u_max
    )


def _check_domain(u, dc: DerivedConstants, eps_dom: float):
    if np.any(np.abs(u) >= dc.u_max - eps_dom):
        worst = float(np.max(np.abs(u)))
        raise DomainError(
            f"|u| = {worst:.17g} reaches the singular boundary u_max = "
            f"{dc.u_max:.17g} where cn(s u, k) vanishes and the conformal "
            f"factor has a pole"
        )


def conformal_factor(p: MetricParams, u, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Conformal factor lambda(u) = sqrt(lambda_plus) / cn(s u, k).

    Even in u, minimal at u = 0 with lambda(0) = sqrt(lambda_plus), and
    increasing towards +inf at the domain boundary.
    """
    dc = derive_constants(p)
    u = np.asarray(u, dtype=float)
    _check_domain(u, dc, eps_dom)
    _, cn, _ = jacobi_sn_cn_dn(dc.s * u, dc.k)
    lam = math.sqrt(dc.lambda_plus) / cn
    return float(lam) if np.ndim(lam) == 0 else lam


def conformal_factor_derivatives(p: MetricParams, u, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Return (lambda, lambda', lambda'') at u.

    lambda'  = sqrt(lambda_plus) s sn(s u) dn(s u) / cn(s u)^2,
    lambda'' = c2 lambda + 4 b^2 lambda^3  (from differentiating the ODE,
    exact wherever the first integral holds, removable at u = 0).
    """
    dc = derive_constants(p)
    u = np.asarray(u, dtype=float)
    _check_domain(u, dc, eps_dom)
    sn, cn, dn = jacobi_sn_cn_dn(dc.s * u, dc.k)
    root = math.sqrt(dc.lambda_plus)
    lam = root / cn
    dlam = root * dc.s * sn * dn / (cn * cn)
    d2lam = p.c2 * lam + 4.0 * p.b * p.b * lam**3
    if np.ndim(lam) == 0:
        return float(lam), float(dlam), float(d2lam)
    return lam, dlam, d2lam


def gaussian_curvature(p: MetricParams, u, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Gaussian curvature K(u) = -2 b^2 - c1 / lambda(u)^4.

    Strictly below -2 b^2 everywhere, even in u, and approaching -2 b^2 as
    |u| -> u_max.
    """
    lam = np.asarray(conformal_factor(p, u, eps_dom=eps_dom), dtype=float)
    curv = -2.0 * p.b * p.b - p.c1 / lam**4
    return float(curv) if curv.ndim == 0 else curv


def theta(p: MetricParams, u, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Amplitude angle theta(u) = am(s u, k), odd in u.

    Satisfies cos(theta) = sqrt(lambda_plus) / lambda(u) and
    theta'^2 = sqrt(disc) - ((c2 + sqrt(disc))/2) sin^2 theta.
    """
    dc = derive_constants(p)
    u = np.asarray(u, dtype=float)
    _check_domain(u, dc, eps_dom)
    ang = jacobi_am(dc.s * u, dc.k)
    return float(ang) if np.ndim(ang) == 0 else ang


def ode_residual(p: MetricParams, u, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Residual lambda'^2 - (-c1 + c2 lambda^2 + 2 b^2 lambda^4).

    Vanishes identically for the closed form; the numerical value stays
    below 1e-9 * max(1, lambda^4) across the domain.
    """
    lam, dlam, _ = conformal_factor_derivatives(p, u, eps_dom=eps_dom)
    lam = np.asarray(lam, dtype=float)
    dlam = np.asarray(dlam, dtype=float)
    res = dlam**2 - (-p.c1 + p.c2 * lam**2 + 2.0 * p.b * p.b * lam**4)
    return float(res) if res.ndim == 0 else res
