"""Surfaces of revolution carrying a special Liouville metric.

A metric lambda(u)^2 (du^2 + dv^2) with lambda^2 >= lambda'^2 is realized
on the surface of revolution (x(u), y(u) cos v, y(u) sin v) with

    y(u) = lambda(u),      x(u) = integral of sqrt(lambda^2 - lambda'^2) du,

and conversely an arc-length profile (x(s), y(s)), y > 0, induces the
metric with conformal factor lambda(u) = y(s(u)) where u(s) = integral of
ds / y(s).  This module implements both directions, structured tube
meshing with OBJ / binary PLY export, and two discrete cross-checks
(induced edge lengths and angle-defect curvature).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import ConvergenceError, ParameterError
from .metric import (
    DEFAULT_EPS_DOM,
    MetricParams,
    conformal_factor,
    conformal_factor_derivatives,
    derive_constants,
)

__all__ = [
    "ProfileCurve",
    "RevolutionMesh",
    "adaptive_simpson",
    "embeddable_interval",
    "embeddable_interval_numeric",
    "profile_from_metric",
    "profile_from_conformal",
    "metric_from_profile",
    "tessellate",
    "induced_metric_check",
    "angle_defect_curvature",
    "profile_to_csv",
    "mesh_to_obj",
    "mesh_to_ply",
]

ARC_LENGTH_TOL = 1e-6
_INTEGRAND_FLOOR = -1e-12
_SIMPSON_MAX_DEPTH = 20  # subdivision cap 2**20 intervals


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled plane curve (x(u), y(u)) generating a surface of revolution.

    y is the rotation radius (strictly positive), u strictly increasing.
    ``monotone`` records whether x is nondecreasing.  ``params`` tags
    profiles built from a family metric for provenance checks downstream.
    """

    u: np.ndarray
    x: np.ndarray
    y: np.ndarray
    monotone: bool
    params: MetricParams | None = None

    def __post_init__(self):
        u, x, y = (np.asarray(a, dtype=float) for a in (self.u, self.x, self.y))
        if not (u.shape == x.shape == y.shape) or u.ndim != 1 or u.size < 2:
            raise ParameterError("profile needs matching 1-d u, x, y arrays")
        if np.any(np.diff(u) <= 0.0):
            raise ParameterError("profile u samples must be strictly increasing")
        if np.any(y <= 0.0):
            raise ParameterError("rotation radius y must be positive everywhere")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class RevolutionMesh:
    """Structured triangulated tube (x(u), y(u) cos v, y(u) sin v).

    vertices: (N, 3) coordinates; uv: (N, 2) parameter tags; faces: (M, 3)
    vertex indices with outward orientation.  ``closed`` marks a full 2 pi
    seam in v.  Vertex index of grid node (i, j) is i * nv + j.
    """

    vertices: np.ndarray
    uv: np.ndarray
    faces: np.ndarray
    nu: int
    nv: int
    closed: bool
    params: MetricParams | None = None

    def __post_init__(self):
        if self.faces.size and (
            self.faces.min() < 0 or self.faces.max() >= len(self.vertices)
        ):
            raise ParameterError("face references an invalid vertex index")


def adaptive_simpson(f, a: float, b: float, tol: float):
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance.

    A leaf interval is accepted when its Richardson error estimate
    (S_fine - S_coarse)/15 falls below ``tol``, and the corrected value
    S_fine + estimate is accumulated, so accepted leaves contribute far
    less than their acceptance threshold.  Keeping the full tolerance per
    leaf (instead of halving it with each split) is what lets integrands
    with a square-root zero at an endpoint converge within the subdivision
    cap of 2**20 intervals; exceeding the cap raises ConvergenceError.
    """
    if tol <= 0.0:
        raise ParameterError("quadrature tolerance must be positive")

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, depth):
        x1 = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + x1), 0.5 * (x1 + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, x1, f0, fl, f1)
        right = simpson(x1, x2, f1, fr, f2)
        err = (left + right - whole) / 15.0
        if abs(err) <= tol:
            return left + right + err
        if depth >= _SIMPSON_MAX_DEPTH:
            raise ConvergenceError(
                f"adaptive Simpson exceeded {_SIMPSON_MAX_DEPTH} subdivision "
                f"levels on [{x0}, {x2}]"
            )
        return recurse(x0, x1, f0, fl, f1, left, depth + 1) + recurse(
            x1, x2, f1, fr, f2, right, depth + 1
        )

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, 0)


def _embeddability_gap(p: MetricParams, u, eps_dom):
    lam, dlam, _ = conformal_factor_derivatives(p, u, eps_dom=eps_dom)
    return lam * lam - dlam * dlam


def embeddable_interval(p: MetricParams, *, eps_dom: float = DEFAULT_EPS_DOM):
    """Maximal symmetric interval around 0 where lambda^2 >= lambda'^2.

    lambda^2(0) = lambda_plus > 0 = lambda'(0)^2, so 0 always qualifies;
    towards the domain boundary lambda'^2 ~ 2 b^2 lambda^4 dominates, so
    the boundary of the interval is the first positive zero of
    lambda^2 - lambda'^2, located by bisection.
    """
    dc = derive_constants(p)
    hi = dc.u_max - max(eps_dom, 1e-12 * dc.u_max)
    g = lambda u: _embeddability_gap(p, u, eps_dom / 2.0)
    if g(hi) >= 0.0:
        return (-hi, hi)
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    return (-lo, lo)


def embeddable_interval_numeric(lam, dlam, u_lo: float, u_hi: float, *, n: int = 4096):
    """Embeddable interval around 0 for callables lambda, lambda'.

    Scans lambda^2 - lambda'^2 on n points of [u_lo, u_hi] and bisects the
    sign changes nearest to 0.  Returns the requested range itself when the
    gap stays nonnegative throughout (for instance lambda = cosh), and a
    degenerate (0.0, 0.0) if the gap is negative immediately off 0.
    """
    if not (u_lo <= 0.0 <= u_hi):
        raise ParameterError("search range must contain 0")
    grid = np.linspace(u_lo, u_hi, n)
    gap = np.asarray([lam(t) ** 2 - dlam(t) ** 2 for t in grid])
    centre = int(np.argmin(np.abs(grid)))
    if gap[centre] < 0.0:
        return (0.0, 0.0)

    def bisect(inside, outside):
        # inside has gap >= 0, outside gap < 0; returns the sign boundary
        a, b = inside, outside
        for _ in range(200):
            m = 0.5 * (a + b)
            if lam(m) ** 2 - dlam(m) ** 2 >= 0.0:
                a = m
            else:
                b = m
            if abs(b - a) <= 1e-14 * max(1.0, abs(b)):
                break
        return a

    hi = u_hi
    for idx in range(centre, n - 1):
        if gap[idx] >= 0.0 > gap[idx + 1]:
            hi = bisect(grid[idx], grid[idx + 1])
            break
    lo = u_lo
    for idx in range(centre, 0, -1):
        if gap[idx] >= 0.0 > gap[idx - 1]:
            lo = bisect(grid[idx], grid[idx - 1])
            break
    return (lo, hi)


def profile_from_conformal(lam, dlam, interval, *, tol: float = 1e-10, n: int = 801):
    """Profile curve of the revolution surface induced by callables lambda, lambda'.

    y(u) = lambda(u) and x(u) accumulates the adaptive-Simpson integral of
    sqrt(lambda^2 - lambda'^2) from the left endpoint (x = 0 there), with
    the total estimated quadrature error below ``tol``.  A gap value below
    -1e-12 at a quadrature node is a precondition breach and is reported
    with its location.
    """
    u_lo, u_hi = float(interval[0]), float(interval[1])
    if not u_lo < u_hi:
        raise ParameterError("interval must satisfy u_lo < u_hi")
    if n < 2:
        raise ParameterError("need at least 2 profile samples")

    def integrand(t):
        gap = lam(t) ** 2 - dlam(t) ** 2
        if gap < _INTEGRAND_FLOOR:
            raise ParameterError(
                f"lambda^2 - lambda'^2 = {gap:.3e} < 0 at u = {t:.17g}: "
                "not embeddable there"
            )
        return math.sqrt(max(gap, 0.0))

    u = np.linspace(u_lo, u_hi, n)
    x = np.empty(n)
    x[0] = 0.0
    seg_tol = tol / (n - 1)
    for i in range(1, n):
        x[i] = x[i - 1] + adaptive_simpson(integrand, u[i - 1], u[i], seg_tol)
    y = np.asarray([lam(t) for t in u], dtype=float)
    monotone = bool(np.all(np.diff(x) >= 0.0))
    return ProfileCurve(u=u, x=x, y=y, monotone=monotone)


def profile_from_metric(
    p: MetricParams,
    interval,
    *,
    tol: float = 1e-10,
    n: int = 801,
    eps_dom: float = DEFAULT_EPS_DOM,
):
    """Profile curve of the revolution realization of a family metric.

    The interval must sit inside both the metric domain and the
    embeddability interval of p.
    """
    u_lo, u_hi = float(interval[0]), float(interval[1])
    emb_lo, emb_hi = embeddable_interval(p, eps_dom=eps_dom)
    if u_lo < emb_lo - 1e-12 or u_hi > emb_hi + 1e-12:
        raise ParameterError(
            f"interval [{u_lo}, {u_hi}] exceeds the embeddable interval "
            f"[{emb_lo:.6g}, {emb_hi:.6g}]"
        )

    def lam(t):
        return conformal_factor(p, t, eps_dom=eps_dom)

    def dlam(t):
        return conformal_factor_derivatives(p, t, eps_dom=eps_dom)[1]

    prof = profile_from_conformal(lam, dlam, (u_lo, u_hi), tol=tol, n=n)
    return ProfileCurve(u=prof.u, x=prof.x, y=prof.y, monotone=prof.monotone, params=p)


def metric_from_profile(s, x, y, resample_n: int):
    """Conformal factor of the metric induced by an arc-length profile.

    Checks x'^2 + y'^2 = 1 (central differences, tolerance 1e-6) and y > 0,
    forms u(s) by integrating the interpolant of 1/y, inverts s(u) with
    shape-preserving monotone cubic interpolation, and returns
    (u_grid, lambda) with lambda(u) = y(s(u)) on a uniform grid of
    ``resample_n`` points starting at u = 0.
    """
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (s.shape == x.shape == y.shape) or s.ndim != 1 or s.size < 4:
        raise ParameterError("need matching 1-d s, x, y arrays with >= 4 samples")
    if np.any(np.diff(s) <= 0.0):
        raise ParameterError("arc-length samples must be strictly increasing")
    if np.any(y <= 0.0):
        bad = int(np.argmax(y <= 0.0))
        raise ParameterError(f"rotation radius y <= 0 at sample {bad}")
    if resample_n < 7:
        raise ParameterError("resample_n must be at least 7")

    dx = np.gradient(x, s, edge_order=2)
    dy = np.gradient(y, s, edge_order=2)
    speed_err = np.abs(dx * dx + dy * dy - 1.0)
    worst = int(np.argmax(speed_err))
    if speed_err[worst] > ARC_LENGTH_TOL:
        raise ParameterError(
            f"profile is not arc-length parametrized: |x'^2 + y'^2 - 1| = "
            f"{speed_err[worst]:.3e} at sample {worst} (s = {s[worst]:.17g})"
        )

    u_of_s = CubicSpline(s, 1.0 / y).antiderivative()
    u_samples = u_of_s(s) - u_of_s(s[0])
    s_of_u = PchipInterpolator(u_samples, s)
    u_grid = np.linspace(0.0, u_samples[-1], resample_n)
    s_grid = s_of_u(u_grid)
    lam = CubicSpline(s, y)(s_grid)
    return u_grid, lam


def tessellate(profile: ProfileCurve, v_lo: float, v_hi: float, nv: int) -> RevolutionMesh:
    """Structured triangle mesh of the revolution surface of a profile.

    Full revolutions (v_hi - v_lo = 2 pi) close the seam: the last column
    of quads wraps back to the first, giving 2 (nu - 1) nv triangles; open
    sweeps keep a boundary in v.  Triangles wind counter-clockwise seen
    from outside (normals point away from the axis).
    """
    if nv < 3:
        raise ParameterError("need nv >= 3 mesh columns")
    if not v_lo < v_hi:
        raise ParameterError("need v_lo < v_hi")
    closed = abs((v_hi - v_lo) - 2.0 * math.pi) <= 1e-12
    nu = profile.u.size
    if closed:
        v = v_lo + (v_hi - v_lo) * np.arange(nv) / nv
    else:
        v = np.linspace(v_lo, v_hi, nv)

    cos_v, sin_v = np.cos(v), np.sin(v)
    verts = np.empty((nu * nv, 3))
    uv = np.empty((nu * nv, 2))
    for i in range(nu):
        base = i * nv
        verts[base : base + nv, 0] = profile.x[i]
        verts[base : base + nv, 1] = profile.y[i] * cos_v
        verts[base : base + nv, 2] = profile.y[i] * sin_v
        uv[base : base + nv, 0] = profile.u[i]
        uv[base : base + nv, 1] = v

    cols = nv if closed else nv - 1
    faces = np.empty((2 * (nu - 1) * cols, 3), dtype=np.int64)
    t = 0
    for i in range(nu - 1):
        for j in range(cols):
            jn = (j + 1) % nv
            a = i * nv + j
            b = (i + 1) * nv + j
            c = (i + 1) * nv + jn
            d = i * nv + jn
            faces[t] = (a, d, b)
            faces[t + 1] = (b, d, c)
            t += 2
    return RevolutionMesh(
        vertices=verts,
        uv=uv,
        faces=faces,
        nu=nu,
        nv=nv,
        closed=closed,
        params=profile.params,
    )


def induced_metric_check(mesh: RevolutionMesh, p: MetricParams) -> float:
    """Max relative deviation of squared edge lengths from the metric.

    u-edges are compared against lambda(u_mid)^2 du^2 and v-edges against
    lambda(u)^2 dv^2, lambda evaluated at the edge-midpoint u from the
    closed form.  Rejects meshes that were not built from p.
    """
    if mesh.params != p:
        raise ParameterError("mesh provenance mismatch: not tessellated from p")
    verts = mesh.vertices.reshape(mesh.nu, mesh.nv, 3)
    uv = mesh.uv.reshape(mesh.nu, mesh.nv, 2)
    worst = 0.0

    du = uv[1:, :, 0] - uv[:-1, :, 0]
    mid_u = 0.5 * (uv[1:, :, 0] + uv[:-1, :, 0])
    lam_mid = conformal_factor(p, mid_u.ravel()).reshape(mid_u.shape)
    d2 = np.sum((verts[1:, :, :] - verts[:-1, :, :]) ** 2, axis=2)
    expected = lam_mid**2 * du**2
    worst = max(worst, float(np.max(np.abs(d2 / expected - 1.0))))

    v = uv[0, :, 1]
    pairs = [(j, j + 1) for j in range(mesh.nv - 1)]
    if mesh.closed:
        pairs.append((mesh.nv - 1, 0))
    lam_row = conformal_factor(p, uv[:, 0, 0])
    for j, jn in pairs:
        dv = v[jn] - v[j]
        if mesh.closed and jn == 0:
            dv += 2.0 * math.pi
        d2 = np.sum((verts[:, jn, :] - verts[:, j, :]) ** 2, axis=1)
        expected = lam_row**2 * dv**2
        worst = max(worst, float(np.max(np.abs(d2 / expected - 1.0))))
    return worst


def _triangle_angles(p0, p1, p2):
    """Angles of triangles given corner coordinate arrays of shape (m, 3)."""
    e0 = p1 - p0
    e1 = p2 - p1
    e2 = p0 - p2

    def angle(u, w):
        cross = np.linalg.norm(np.cross(u, w), axis=1)
        dot = np.einsum("ij,ij->i", u, w)
        return np.arctan2(cross, dot)

    a0 = angle(e0, -e2)
    a1 = angle(e1, -e0)
    a2 = angle(e2, -e1)
    return a0, a1, a2


def angle_defect_curvature(mesh: RevolutionMesh):
    """Discrete Gaussian curvature (2 pi - sum of incident angles) / area.

    The area share is the mixed Voronoi cell (cotangent formula with the
    obtuse-triangle fallback).  Only interior vertices (full triangle fans)
    are estimated: rows 1..nu-2, and for open meshes also columns
    1..nv-2.  Zero-area triangles are skipped and their vertices reported.

    Returns (vertex_indices, curvature_estimates, areas, skipped_vertices).
    """
    verts = mesh.vertices
    faces = mesh.faces
    p0, p1, p2 = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    cross = np.cross(p1 - p0, p2 - p0)
    area2 = np.linalg.norm(cross, axis=1)
    degenerate = area2 <= 0.0
    skipped = np.unique(faces[degenerate].ravel())
    ok = ~degenerate
    f = faces[ok]
    a0, a1, a2 = _triangle_angles(p0[ok], p1[ok], p2[ok])
    tri_area = 0.5 * area2[ok]

    angle_sum = np.zeros(len(verts))
    np.add.at(angle_sum, f[:, 0], a0)
    np.add.at(angle_sum, f[:, 1], a1)
    np.add.at(angle_sum, f[:, 2], a2)

    # mixed Voronoi areas (cot formula, obtuse fallback: A/2 at the obtuse
    # corner, A/4 at the others)
    area_share = np.zeros(len(verts))
    sq = {
        0: np.sum((p1[ok] - p2[ok]) ** 2, axis=1),
        1: np.sum((p2[ok] - p0[ok]) ** 2, axis=1),
        2: np.sum((p0[ok] - p1[ok]) ** 2, axis=1),
    }
    angles = {0: a0, 1: a1, 2: a2}
    cots = {i: 1.0 / np.tan(angles[i]) for i in range(3)}
    obtuse_at = np.full(len(f), -1)
    for i in range(3):
        obtuse_at[angles[i] > 0.5 * math.pi] = i
    non_obtuse = obtuse_at < 0
    for i in range(3):
        j, kk = (i + 1) % 3, (i + 2) % 3
        contrib = np.where(
            non_obtuse,
            (sq[kk] * cots[kk] + sq[j] * cots[j]) / 8.0,
            np.where(obtuse_at == i, tri_area / 2.0, tri_area / 4.0),
        )
        np.add.at(area_share, f[:, i], contrib)

    rows = np.arange(1, mesh.nu - 1)
    if mesh.closed:
        cols = np.arange(mesh.nv)
    else:
        cols = np.arange(1, mesh.nv - 1)
    ids = (rows[:, None] * mesh.nv + cols[None, :]).ravel()
    ids = ids[~np.isin(ids, skipped)]
    defect = 2.0 * math.pi - angle_sum[ids]
    return ids, defect / area_share[ids], area_share[ids], skipped


def profile_to_csv(profile: ProfileCurve) -> str:
    """CSV rendering of a profile with columns u, x, y (17 significant digits)."""
    lines = ["u,x,y"]
    for u, x, y in zip(profile.u, profile.x, profile.y):
        lines.append(f"{u:.17g},{x:.17g},{y:.17g}")
    return "\r\n".join(lines) + "\r\n"


def _vertex_normals(mesh: RevolutionMesh) -> np.ndarray:
    verts, faces = mesh.vertices, mesh.faces
    fn = np.cross(
        verts[faces[:, 1]] - verts[faces[:, 0]],
        verts[faces[:, 2]] - verts[faces[:, 0]],
    )
    normals = np.zeros_like(verts)
    for c in range(3):
        np.add.at(normals, faces[:, c], fn)
    norm = np.linalg.norm(normals, axis=1)
    norm[norm == 0.0] = 1.0
    return normals / norm[:, None]


def mesh_to_obj(mesh: RevolutionMesh) -> str:
    """Wavefront OBJ text: v and vn records plus f records (1-based, CCW)."""
    out = ["# surface of revolution, outward orientation"]
    for p in mesh.vertices:
        out.append(f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
    for nrm in _vertex_normals(mesh):
        out.append(f"vn {nrm[0]:.17g} {nrm[1]:.17g} {nrm[2]:.17g}")
    for a, b, c in mesh.faces:
        out.append(f"f {a + 1}//{a + 1} {b + 1}//{b + 1} {c + 1}//{c + 1}")
    return "\n".join(out) + "\n"


def mesh_to_ply(mesh: RevolutionMesh) -> bytes:
    """Binary little-endian PLY with per-vertex x, y, z, u, v (float64)."""
    n, m = len(mesh.vertices), len(mesh.faces)
    header = (
        "ply\n"
        "format binary_little_endian 1.0\n"
        f"element vertex {n}\n"
        "property double x\n"
        "property double y\n"
        "property double z\n"
        "property double u\n"
        "property double v\n"
        f"element face {m}\n"
        "property list uchar int vertex_indices\n"
        "end_header\n"
    ).encode("ascii")
    vdata = np.hstack([mesh.vertices, mesh.uv]).astype("<f8").tobytes()
    face_parts = []
    for a, b, c in mesh.faces:
        face_parts.append(struct.pack("<Biii", 3, int(a), int(b), int(c)))
    return header + vdata + b"".join(face_parts)
