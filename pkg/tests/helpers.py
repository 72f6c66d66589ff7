"""Shared oracles for the test suite.

Everything here is deliberately independent of the code paths under test:
ODE integration instead of the elliptic closed form, quadrature of defining
integrals, and spline resampling for profile round trips.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from ricci_liouville import MetricGrid, MetricParams, derive_constants


def sweep_params():
    """The 3 x 3 x 3 parameter box used across the verification suite."""
    return [
        MetricParams(b=b, c1=c1, c2=c2)
        for b in (1.0 / math.sqrt(6.0), 0.5, 1.0)
        for c1 in (0.25, 1.0, 4.0)
        for c2 in (-2.0, 0.0, 3.0)
    ]


def lambda_ode_oracle(p, u_points, rtol=1e-12, atol=1e-13):
    """Integrate lambda'' = c2 lambda + 4 b^2 lambda^3 from the minimum.

    Initial data lambda(0) = sqrt(lambda_plus), lambda'(0) = 0 selects the
    same solution as the first-order equation, since the first integral is
    conserved.  Returns lambda at the requested points (may include
    negative u; integrated in two sweeps from 0).
    """
    dc = derive_constants(p)
    lam0 = math.sqrt(dc.lambda_plus)
    b2 = p.b * p.b

    def rhs(_, y):
        return [y[1], p.c2 * y[0] + 4.0 * b2 * y[0] ** 3]

    u_points = np.asarray(u_points, dtype=float)
    out = np.empty_like(u_points)
    for sign in (1.0, -1.0):
        mask = (u_points >= 0.0) if sign > 0 else (u_points < 0.0)
        if not np.any(mask):
            continue
        pts = u_points[mask]
        order = np.argsort(np.abs(pts))
        t_eval = pts[order]
        span = float(np.max(np.abs(pts)))
        if span == 0.0:
            out[mask] = lam0
            continue
        sol = solve_ivp(
            rhs,
            (0.0, sign * span),
            [lam0, 0.0],
            method="DOP853",
            rtol=rtol,
            atol=atol,
            t_eval=t_eval,
        )
        vals = np.empty_like(pts)
        vals[order] = sol.y[0]
        out[mask] = vals
    return out


def amplitude_ode_oracle(u, k, rtol=1e-12, atol=1e-14):
    """Integrate theta' = sqrt(1 - k^2 sin^2 theta), theta(0) = 0, up to u."""

    def rhs(_, y):
        return [math.sqrt(max(0.0, 1.0 - k * k * math.sin(y[0]) ** 2))]

    if u == 0.0:
        return 0.0
    sol = solve_ivp(rhs, (0.0, u), [0.0], method="DOP853", rtol=rtol, atol=atol)
    return float(sol.y[0][-1])


def arc_length_resample(u, x, y, n):
    """Resample a profile curve to n uniform arc-length samples.

    Returns (s, x, y) with s starting at 0.  Arc length is accumulated from
    spline derivatives of the input samples.
    """
    u = np.asarray(u, dtype=float)
    xs = CubicSpline(u, x)
    ys = CubicSpline(u, y)
    speed = np.hypot(xs.derivative()(u), ys.derivative()(u))
    s_samples = CubicSpline(u, speed).antiderivative()(u)
    s_samples -= s_samples[0]
    s_uni = np.linspace(0.0, s_samples[-1], n)
    x_of_s = CubicSpline(s_samples, xs(u))
    y_of_s = CubicSpline(s_samples, ys(u))
    return s_uni, x_of_s(s_uni), y_of_s(s_uni)


def perturbed_metric_grid(p, spec, q=0.01):
    """Grid for lambda (1 + q u^2): a metric violating the curvature condition.

    The curvature field is exact for the perturbed factor:
    (log lam~)'' = (c1 + 2 b^2 lam^4) / lam^2 + d^2/du^2 log(1 + q u^2),
    so the residual measures model error, not discretization error.
    """
    from ricci_liouville import conformal_factor

    u = spec.u_nodes()
    lam = conformal_factor(p, u)
    lam_t = lam * (1.0 + q * u**2)
    log_lam_dd = (p.c1 + 2.0 * p.b**2 * lam**4) / lam**2 + 2.0 * q * (
        1.0 - q * u**2
    ) / (1.0 + q * u**2) ** 2
    curv = -log_lam_dd / lam_t**2
    return MetricGrid(
        spec=spec,
        lambda_field=np.repeat(lam_t[:, None], spec.nv, axis=1),
        curvature_field=np.repeat(curv[:, None], spec.nv, axis=1),
    )


def ricci_condition_4th_order_oracle(b, y0, half_span, h_sample, substeps=20):
    """Integrate the curvature condition as a 4th-order scalar ODE in phi.

    State (phi, phi', phi'', phi''').  With W = phi'' e^{-2 phi} - 2 b^2
    (which must stay positive) the condition
    (log sqrt(W))'' e^{-2 phi} = 2 K = -2 phi'' e^{-2 phi} pins phi'''' as

        phi'''' = 2 phi''^2 + 4 phi' phi''' - 4 phi'^2 phi''
                  + e^{2 phi} (-4 phi'' W + W'^2 / W).

    Solutions have log(lambda^2 sqrt(-2 b^2 - K)) exactly affine in u.
    Fixed-step RK4 from u = 0 in both directions, landing exactly on the
    sample grid, so the returned phi carries only a smooth drift error and
    no interpolation noise (which stencils would amplify).  Returns
    (u, phi) over [-half_span, half_span] with spacing h_sample.
    """

    def rhs(y):
        phi, p1, p2, p3 = y
        em2 = math.exp(-2.0 * phi)
        w = p2 * em2 - 2.0 * b * b
        wp = (p3 - 2.0 * p1 * p2) * em2
        wpp = -4.0 * p2 * w + wp * wp / w
        p4 = wpp / em2 + 2.0 * p2**2 + 4.0 * p1 * p3 - 4.0 * p1**2 * p2
        return np.array([p1, p2, p3, p4])

    n_side = int(round(half_span / h_sample))

    def integrate(direction):
        h = direction * h_sample / substeps
        y = np.array(y0, dtype=float)
        out = [y[0]]
        for _ in range(n_side):
            for _ in range(substeps):
                k1 = rhs(y)
                k2 = rhs(y + 0.5 * h * k1)
                k3 = rhs(y + 0.5 * h * k2)
                k4 = rhs(y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out.append(y[0])
        return out

    fwd = integrate(+1.0)
    bwd = integrate(-1.0)
    phi = np.array(bwd[::-1] + fwd[1:])
    u = h_sample * np.arange(-n_side, n_side + 1)
    return u, phi
