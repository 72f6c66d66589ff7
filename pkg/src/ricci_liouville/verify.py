"""Finite-difference certification of the Ricci-type curvature condition.

For the conformal metric lambda(u)^2 (du^2 + dv^2) the Laplace-Beltrami
operator is Delta f = (f_uu + f_vv) / lambda^2, and the condition under
test is

    Delta log sqrt(-2 b^2 - K) = 2 K,     K < -2 b^2.

Family members satisfy it exactly, so the discrete residual of the
classical 5-point stencil is pure O(h^2) discretization error; that order
is what the convergence study certifies.  A 1-d specialization classifies
arbitrary sampled special Liouville metrics, and the normalization fit
recovers the affine-log law log(lambda^2 sqrt(-2 b^2 - K)) = log a + c u
that characterizes solutions.

Boundary layers are trimmed (no one-sided stencils), keeping a uniform
O(h^2) error model.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, NotInFamilyError, ParameterError
from .metric import (
    DEFAULT_EPS_DOM,
    MetricParams,
    conformal_factor,
    derive_constants,
    gaussian_curvature,
)

__all__ = [
    "GridSpec",
    "MetricGrid",
    "NormalizationFit",
    "sample_grid",
    "ricci_residual_grid",
    "convergence_order",
    "estimate_order",
    "ricci_residual_1d",
    "ricci_order_1d",
    "fit_normalization",
    "in_family_verdict",
    "grid_to_csv",
    "summary_to_json",
    "RESIDUAL_UNDERFLOW",
]

RESIDUAL_UNDERFLOW = 1e-13


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid with square cells.

    The 5-point Laplacian requires the spacing to be identical in u and v;
    construction rejects mismatched spacings (tolerance 1e-12).
    """

    u_lo: float
    u_hi: float
    v_lo: float
    v_hi: float
    nu: int
    nv: int

    def __post_init__(self):
        if not (self.u_lo < self.u_hi and self.v_lo < self.v_hi):
            raise ParameterError("grid bounds must satisfy lo < hi")
        if self.nu < 2 or self.nv < 2:
            raise ParameterError("grid needs at least 2 points per direction")
        hu = (self.u_hi - self.u_lo) / (self.nu - 1)
        hv = (self.v_hi - self.v_lo) / (self.nv - 1)
        if abs(hu - hv) > 1e-12:
            raise ParameterError(
                f"cells must be square: spacing {hu!r} in u vs {hv!r} in v"
            )

    @property
    def h(self) -> float:
        return (self.u_hi - self.u_lo) / (self.nu - 1)

    def u_nodes(self) -> np.ndarray:
        return np.linspace(self.u_lo, self.u_hi, self.nu)

    def v_nodes(self) -> np.ndarray:
        return np.linspace(self.v_lo, self.v_hi, self.nv)

    def refined(self, factor: int) -> "GridSpec":
        """Same rectangle with spacing divided by ``factor``."""
        return GridSpec(
            self.u_lo,
            self.u_hi,
            self.v_lo,
            self.v_hi,
            (self.nu - 1) * factor + 1,
            (self.nv - 1) * factor + 1,
        )


@dataclass
class MetricGrid:
    """Sampled conformal factor and curvature over a GridSpec.

    Axis 0 runs along u, axis 1 along v; lambda_field is constant along v
    (the defining property of a special Liouville metric).  The residual
    field is filled by ricci_residual_grid (NaN on the trimmed boundary).
    """

    spec: GridSpec
    lambda_field: np.ndarray
    curvature_field: np.ndarray
    ricci_residual_field: np.ndarray | None = field(default=None)

    def __post_init__(self):
        shape = (self.spec.nu, self.spec.nv)
        if self.lambda_field.shape != shape or self.curvature_field.shape != shape:
            raise ParameterError(f"field shapes must equal {shape}")
        if not np.allclose(
            self.lambda_field, self.lambda_field[:, :1], rtol=0.0, atol=1e-12
        ):
            raise ParameterError("lambda_field must be constant along v")


@dataclass(frozen=True)
class NormalizationFit:
    """Affine fit of F(u) = log(lambda^2 sqrt(-2 b^2 - K)).

    c1_fit is exp(intercept) and c2_fit the slope; for a metric of the
    closed-form family c2_fit ~ 0 and c1_fit ~ sqrt(c1).  The deviation of
    the data from the fitted line is reported, never hidden.
    """

    c1_fit: float
    c2_fit: float
    max_affine_residual: float

    def __post_init__(self):
        if self.c1_fit <= 0.0:
            raise ParameterError("fitted multiplicative constant must be positive")
        if self.max_affine_residual < 0.0:
            raise ParameterError("max_affine_residual must be nonnegative")


def sample_grid(p: MetricParams, g: GridSpec, *, eps_dom: float = DEFAULT_EPS_DOM) -> MetricGrid:
    """Fill lambda and K over the grid from the closed form.

    The u-range must sit strictly inside the metric domain.
    """
    dc = derive_constants(p)
    if not (-dc.u_max + eps_dom < g.u_lo and g.u_hi < dc.u_max - eps_dom):
        raise ParameterError(
            f"grid u-range [{g.u_lo}, {g.u_hi}] must lie strictly inside "
            f"(-{dc.u_max:.6g}, {dc.u_max:.6g})"
        )
    u = g.u_nodes()
    lam = conformal_factor(p, u, eps_dom=eps_dom)
    curv = gaussian_curvature(p, u, eps_dom=eps_dom)
    lam_field = np.repeat(lam[:, None], g.nv, axis=1)
    curv_field = np.repeat(curv[:, None], g.nv, axis=1)
    return MetricGrid(spec=g, lambda_field=lam_field, curvature_field=curv_field)


def ricci_residual_grid(m: MetricGrid, b: float) -> float:
    """Max |Delta log sqrt(-2 b^2 - K) - 2 K| over interior grid points.

    Uses the 5-point stencil for f_uu + f_vv and divides by lambda^2 for
    the Laplace-Beltrami operator of the conformal metric.  Stores the
    residual field (NaN on the boundary layer) on the grid and returns the
    interior max.  Requires K < -2 b^2 at every grid point.
    """
    g = m.spec
    if g.nu < 5 or g.nv < 5:
        raise ParameterError("residual stencil needs a grid of at least 5x5")
    w = -2.0 * b * b - m.curvature_field
    if np.any(w <= 0.0):
        i, j = np.unravel_index(int(np.argmin(w)), w.shape)
        raise NotInFamilyError(
            f"K >= -2 b^2 at grid point ({i}, {j}); "
            "log sqrt(-2 b^2 - K) is undefined there",
            index=(int(i), int(j)),
        )
    f = 0.5 * np.log(w)
    h2 = g.h * g.h
    lap = (
        f[2:, 1:-1] + f[:-2, 1:-1] + f[1:-1, 2:] + f[1:-1, :-2] - 4.0 * f[1:-1, 1:-1]
    ) / h2
    res = lap / m.lambda_field[1:-1, 1:-1] ** 2 - 2.0 * m.curvature_field[1:-1, 1:-1]
    out = np.full_like(f, np.nan)
    out[1:-1, 1:-1] = res
    m.ricci_residual_field = out
    return float(np.max(np.abs(res)))


def estimate_order(hs, residuals) -> float:
    """Least-squares slope of log(residual) against log(h).

    Levels whose residual underflows below RESIDUAL_UNDERFLOW are excluded;
    fewer than two usable levels is an error.
    """
    hs = np.asarray(hs, dtype=float)
    rs = np.asarray(residuals, dtype=float)
    keep = rs > RESIDUAL_UNDERFLOW
    if int(np.count_nonzero(keep)) < 2:
        raise ConvergenceError(
            "fewer than 2 levels with residual above the underflow floor "
            f"{RESIDUAL_UNDERFLOW}"
        )
    slope, _ = np.polyfit(np.log(hs[keep]), np.log(rs[keep]), 1)
    return float(slope)


def convergence_order(p: MetricParams, base: GridSpec, levels: int) -> float:
    """Estimated convergence order of the Ricci residual under h -> h/2.

    Runs ricci_residual_grid on the base grid and ``levels - 1`` uniform
    refinements and fits the log-log slope; family metrics give ~2.
    """
    if levels < 2:
        raise ParameterError("need at least 2 refinement levels")
    hs, rs = [], []
    for lev in range(levels):
        spec = base.refined(2**lev)
        grid = sample_grid(p, spec)
        hs.append(spec.h)
        rs.append(ricci_residual_grid(grid, p.b))
    return estimate_order(hs, rs)


def _second_difference(arr: np.ndarray, h: float) -> np.ndarray:
    return (arr[2:] - 2.0 * arr[1:-1] + arr[:-2]) / (h * h)


def ricci_residual_1d(phi, b: float, h: float) -> np.ndarray:
    """Residual of the curvature condition for v-independent sampled data.

    ``phi`` holds log(lambda) on a uniform u-grid with spacing h.  The
    curvature K = -phi'' e^{-2 phi} is formed with the 3-point stencil,
    then the condition (log sqrt(-2 b^2 - K))'' e^{-2 phi} - 2 K is
    stencilled once more; two layers are trimmed per side, so the result
    has len(phi) - 4 entries.

    Raises NotInFamilyError naming the first offending sample when
    -2 b^2 - K <= 0 somewhere: such data definitely violates the curvature
    inequality of the family at the sampled resolution.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 1 or phi.size < 7:
        raise ParameterError("need at least 7 samples of log(lambda)")
    if h <= 0.0:
        raise ParameterError("spacing h must be positive")
    curv = -_second_difference(phi, h) * np.exp(-2.0 * phi[1:-1])
    w = -2.0 * b * b - curv
    if np.any(w <= 0.0):
        bad = int(np.argmax(w <= 0.0)) + 1
        raise NotInFamilyError(
            f"K >= -2 b^2 at sample index {bad}: not in family at sampled resolution",
            index=bad,
        )
    f = 0.5 * np.log(w)
    return _second_difference(f, h) * np.exp(-2.0 * phi[2:-2]) - 2.0 * curv[1:-1]


def ricci_order_1d(phi, b: float, h: float, strides=(1, 2, 4)):
    """Convergence order of the 1-d residual under coarsening strides.

    Residuals are compared at the physical points common to all strides
    (the interior of the coarsest grid), which removes the drift that the
    advancing trim boundary would otherwise add to the slope.  Returns
    (order, residuals) with one max per stride.
    """
    phi = np.asarray(phi, dtype=float)
    strides = sorted(int(s) for s in strides)
    coarsest = strides[-1]
    if phi.size < 4 * coarsest + 3:
        raise ParameterError(
            f"need at least {4 * coarsest + 3} samples for stride {coarsest}"
        )
    n_sub = (phi.size - 1) // coarsest + 1
    common = coarsest * np.arange(2, n_sub - 2)  # interior of the coarsest grid
    hs, maxima = [], []
    for stride in strides:
        res = ricci_residual_1d(phi[::stride], b, h * stride)
        # residual index i corresponds to sample index stride * (i + 2)
        idx = common // stride - 2
        hs.append(h * stride)
        maxima.append(float(np.max(np.abs(res[idx]))))
    return estimate_order(hs, maxima), maxima


def fit_normalization(lambda_samples, b: float, h: float, *, u0: float | None = None) -> NormalizationFit:
    """Fit F(u) = log(lambda^2 sqrt(-2 b^2 - K)) by an affine law in u.

    K comes from central differences of log(lambda).  Ordinary least
    squares over the interior points; ``u0`` fixes the u-coordinate of the
    first sample (default centres the grid at 0, which only affects the
    intercept).  Exact solutions of the curvature condition have an exactly
    affine F, so max_affine_residual is O(h^2) for them.
    """
    lam = np.asarray(lambda_samples, dtype=float)
    if lam.ndim != 1 or lam.size < 7:
        raise ParameterError("need at least 7 lambda samples")
    if np.any(lam <= 0.0):
        raise ParameterError("lambda samples must be positive")
    phi = np.log(lam)
    curv = -_second_difference(phi, h) * np.exp(-2.0 * phi[1:-1])
    w = -2.0 * b * b - curv
    if np.any(w <= 0.0):
        bad = int(np.argmax(w <= 0.0)) + 1
        raise NotInFamilyError(
            f"K >= -2 b^2 at sample index {bad}: not in family at sampled resolution",
            index=bad,
        )
    big_f = 2.0 * phi[1:-1] + 0.5 * np.log(w)
    n = lam.size
    if u0 is None:
        u = (np.arange(1, n - 1) - (n - 1) / 2.0) * h
    else:
        u = u0 + np.arange(1, n - 1) * h
    slope, intercept = np.polyfit(u, big_f, 1)
    resid = big_f - (intercept + slope * u)
    return NormalizationFit(
        c1_fit=float(math.exp(intercept)),
        c2_fit=float(slope),
        max_affine_residual=float(np.max(np.abs(resid))),
    )


def in_family_verdict(max_residual: float, order: float, h: float) -> bool:
    """Membership rule: residual below max(1e-6, 10 h^2) and order in [1.8, 2.2]."""
    return max_residual < max(1e-6, 10.0 * h * h) and 1.8 <= order <= 2.2


def grid_to_csv(m: MetricGrid) -> str:
    """Render the grid as RFC-4180 CSV with columns u, v, lambda, K, residual.

    Floats carry 17 significant digits; the residual column is empty where
    the stencil is undefined.
    """
    u = m.spec.u_nodes()
    v = m.spec.v_nodes()
    res = m.ricci_residual_field
    buf = io.StringIO()
    buf.write("u,v,lambda,K,residual\r\n")
    for i in range(m.spec.nu):
        for j in range(m.spec.nv):
            r = ""
            if res is not None and not math.isnan(res[i, j]):
                r = f"{res[i, j]:.17g}"
            buf.write(
                f"{u[i]:.17g},{v[j]:.17g},{m.lambda_field[i, j]:.17g},"
                f"{m.curvature_field[i, j]:.17g},{r}\r\n"
            )
    return buf.getvalue()


def summary_to_json(
    max_residual: float,
    order: float | None,
    fit: NormalizationFit | None,
    h: float,
    verdict: bool | None = None,
) -> str:
    """JSON summary with stable key order."""
    payload = {
        "max_residual": max_residual,
        "order": order,
        "h": h,
        "c1_fit": fit.c1_fit if fit is not None else None,
        "c2_fit": fit.c2_fit if fit is not None else None,
        "max_affine_residual": fit.max_affine_residual if fit is not None else None,
        "verdict": verdict,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
