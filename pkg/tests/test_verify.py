import math

import numpy as np
import pytest

from ricci_liouville import (
    ConvergenceError,
    GridSpec,
    MetricGrid,
    MetricParams,
    NotInFamilyError,
    ParameterError,
    conformal_factor,
    convergence_order,
    derive_constants,
    estimate_order,
    fit_normalization,
    grid_to_csv,
    in_family_verdict,
    ricci_order_1d,
    ricci_residual_1d,
    ricci_residual_grid,
    sample_grid,
)

from helpers import perturbed_metric_grid, ricci_condition_4th_order_oracle, sweep_params


def constant_curvature_grid(spec, b_tilde):
    """Negative control: lambda = 1/(b~ u) on u > 0 has constant K = -b~^2."""
    u = spec.u_nodes()
    lam = 1.0 / (b_tilde * u)
    curv = np.full_like(lam, -b_tilde * b_tilde)
    return MetricGrid(
        spec=spec,
        lambda_field=np.repeat(lam[:, None], spec.nv, axis=1),
        curvature_field=np.repeat(curv[:, None], spec.nv, axis=1),
    )


class TestGridSpec:
    def test_square_cells_required(self):
        with pytest.raises(ParameterError, match="square"):
            GridSpec(0.0, 1.0, 0.0, 2.0, 11, 11)

    def test_bad_bounds(self):
        with pytest.raises(ParameterError):
            GridSpec(1.0, 0.0, 0.0, 1.0, 11, 11)

    def test_spacing_and_refinement(self):
        g = GridSpec(-0.5, 0.5, -0.5, 0.5, 11, 11)
        assert g.h == pytest.approx(0.1, abs=1e-15)
        fine = g.refined(2)
        assert fine.nu == 21 and fine.h == pytest.approx(0.05, abs=1e-15)


class TestSampleGrid:
    def test_trivial_two_by_two(self, ref_params):
        g = sample_grid(ref_params, GridSpec(-0.1, 0.1, -0.1, 0.1, 2, 2))
        assert g.lambda_field.shape == (2, 2)
        assert np.all(g.lambda_field[:, 0] == g.lambda_field[:, 1])

    def test_symmetric_about_middle_column(self, ref_params):
        g = sample_grid(ref_params, GridSpec(-0.5, 0.5, -0.5, 0.5, 101, 101))
        assert np.max(np.abs(g.lambda_field - g.lambda_field[::-1, :])) < 1e-12

    def test_curvature_bounds(self, ref_params):
        g = sample_grid(ref_params, GridSpec(-0.5, 0.5, -0.5, 0.5, 21, 21))
        assert np.all(np.isfinite(g.curvature_field))
        assert np.all(g.curvature_field < -2.0 * ref_params.b**2)

    def test_rejects_grid_outside_domain(self, ref_params):
        dc = derive_constants(ref_params)
        with pytest.raises(ParameterError, match="inside"):
            sample_grid(ref_params, GridSpec(-dc.u_max, dc.u_max, -dc.u_max, dc.u_max, 11, 11))

    def test_lambda_field_constancy_enforced(self, ref_params):
        g = sample_grid(ref_params, GridSpec(-0.1, 0.1, -0.1, 0.1, 5, 5))
        broken = g.lambda_field.copy()
        broken[2, 3] *= 1.5
        with pytest.raises(ParameterError, match="constant along v"):
            MetricGrid(spec=g.spec, lambda_field=broken, curvature_field=g.curvature_field)


class TestRicciResidualGrid:
    def test_reference_residual_small(self, ref_params):
        spec = GridSpec(-0.5, 0.5, -0.5, 0.5, 101, 101)
        res = ricci_residual_grid(sample_grid(ref_params, spec), ref_params.b)
        assert res < 1e-3

    def test_residual_field_stored_with_trimmed_boundary(self, ref_params):
        spec = GridSpec(-0.5, 0.5, -0.5, 0.5, 11, 11)
        grid = sample_grid(ref_params, spec)
        ricci_residual_grid(grid, ref_params.b)
        field = grid.ricci_residual_field
        assert np.all(np.isnan(field[0, :])) and np.all(np.isnan(field[:, -1]))
        assert np.all(np.isfinite(field[1:-1, 1:-1]))

    def test_requires_five_by_five(self, ref_params):
        grid = sample_grid(ref_params, GridSpec(-0.1, 0.1, -0.1, 0.1, 4, 4))
        with pytest.raises(ParameterError, match="5x5"):
            ricci_residual_grid(grid, ref_params.b)

    def test_negative_control_stays_positive(self):
        spec = GridSpec(1.0, 2.0, 0.0, 1.0, 41, 41)
        res = ricci_residual_grid(constant_curvature_grid(spec, 1.0), 0.5)
        assert res == pytest.approx(2.0, rel=1e-9)
        fine = ricci_residual_grid(constant_curvature_grid(spec.refined(2), 1.0), 0.5)
        assert fine == pytest.approx(2.0, rel=1e-9)

    def test_refinement_quarters_residual(self, ref_params):
        spec = GridSpec(-0.5, 0.5, -0.5, 0.5, 51, 51)
        r1 = ricci_residual_grid(sample_grid(ref_params, spec), ref_params.b)
        r2 = ricci_residual_grid(sample_grid(ref_params, spec.refined(2)), ref_params.b)
        assert 3.4 < r1 / r2 < 4.6

    def test_rejects_curvature_above_bound(self):
        spec = GridSpec(1.0, 2.0, 0.0, 1.0, 11, 11)
        grid = constant_curvature_grid(spec, 1.0)
        with pytest.raises(NotInFamilyError):
            ricci_residual_grid(grid, 1.0)  # -2 b^2 = -2 < K = -1


class TestConvergenceOrder:
    def test_reference_order_two(self, ref_params):
        base = GridSpec(-0.5, 0.5, -0.5, 0.5, 51, 51)  # h = 0.02, refined to 0.005
        order = convergence_order(ref_params, base, 3)
        assert 1.8 <= order <= 2.2

    def test_two_levels_matches_log2_formula(self, ref_params):
        base = GridSpec(-0.5, 0.5, -0.5, 0.5, 51, 51)
        r1 = ricci_residual_grid(sample_grid(ref_params, base), ref_params.b)
        r2 = ricci_residual_grid(sample_grid(ref_params, base.refined(2)), ref_params.b)
        order = convergence_order(ref_params, base, 2)
        assert order == pytest.approx(math.log2(r1 / r2), abs=1e-12)

    def test_levels_validation(self, ref_params):
        with pytest.raises(ParameterError):
            convergence_order(ref_params, GridSpec(-0.5, 0.5, -0.5, 0.5, 51, 51), 1)

    def test_underflow_levels_excluded(self):
        assert estimate_order([0.02, 0.01, 0.005], [4e-4, 1e-4, 1e-20]) == pytest.approx(
            2.0, abs=1e-12
        )
        with pytest.raises(ConvergenceError):
            estimate_order([0.02, 0.01], [1e-20, 1e-20])

    def test_perturbed_metric_plateaus(self, ref_params):
        hs, rs = [], []
        base = GridSpec(-0.5, 0.5, -0.5, 0.5, 51, 51)
        for lev in range(3):
            spec = base.refined(2**lev)
            rs.append(ricci_residual_grid(perturbed_metric_grid(ref_params, spec), ref_params.b))
            hs.append(spec.h)
        assert abs(estimate_order(hs, rs)) < 0.5


class TestRicciResidual1d:
    def test_order_two_on_closed_form(self, ref_params):
        u = np.arange(-0.4, 0.4 + 1e-12, 0.005)
        lam = conformal_factor(ref_params, u)
        order, maxima = ricci_order_1d(np.log(lam), ref_params.b, 0.005)
        assert 1.8 <= order <= 2.2
        assert maxima[0] < maxima[1] < maxima[2]

    def test_matches_grid_on_fixed_row(self, ref_params):
        # feed the 2-d stencil the same finite-difference curvature the 1-d
        # path derives, then the interior rows must agree to rounding
        h = 0.04
        u = np.arange(-0.4, 0.4 + 1e-12, h)
        lam = conformal_factor(ref_params, u)
        phi = np.log(lam)
        res_1d = ricci_residual_1d(phi, ref_params.b, h)

        curv_fd = -(phi[2:] - 2 * phi[1:-1] + phi[:-2]) / h**2 * np.exp(-2 * phi[1:-1])
        nv = 5
        spec = GridSpec(u[1], u[-2], 0.0, (nv - 1) * h, len(u) - 2, nv)
        grid = MetricGrid(
            spec=spec,
            lambda_field=np.repeat(lam[1:-1, None], nv, axis=1),
            curvature_field=np.repeat(curv_fd[:, None], nv, axis=1),
        )
        ricci_residual_grid(grid, ref_params.b)
        row = grid.ricci_residual_field[1:-1, 2]
        assert np.max(np.abs(row - res_1d)) < 1e-12

    def test_flat_metric_rejected(self):
        with pytest.raises(NotInFamilyError, match="sampled resolution"):
            ricci_residual_1d(np.zeros(21), 0.5, 0.1)

    def test_reports_offending_index(self):
        phi = np.log(1.0 / np.cosh(np.linspace(-1, 1, 21)))  # sphere: K = +1
        with pytest.raises(NotInFamilyError) as err:
            ricci_residual_1d(phi, 0.5, 0.1)
        assert err.value.index == 1

    def test_needs_seven_samples(self):
        with pytest.raises(ParameterError):
            ricci_residual_1d(np.zeros(6), 0.5, 0.1)


class TestFitNormalization:
    def test_reference_member_constants(self, ref_params):
        h = 1e-3
        u = np.arange(-0.4, 0.4 + 1e-12, h)
        lam = conformal_factor(ref_params, u)
        fit = fit_normalization(lam, ref_params.b, h)
        assert abs(fit.c2_fit) < 10 * h * h
        assert abs(fit.c1_fit - 1.0) < 1e-4  # sqrt(c1) = 1 here
        assert fit.max_affine_residual < 1e-4

    def test_multiplicative_constant_is_sqrt_c1(self):
        p = MetricParams(b=0.5, c1=4.0, c2=0.0)
        h = 1e-3
        u = np.arange(-0.3, 0.3 + 1e-12, h)
        lam = conformal_factor(p, u)
        fit = fit_normalization(lam, p.b, h)
        assert fit.c1_fit == pytest.approx(2.0, abs=1e-4)
        assert abs(fit.c2_fit) < 10 * h * h

    def test_perturbed_samples_do_not_pass(self, ref_params):
        residuals = []
        for h in (0.004, 0.002):
            u = np.arange(-0.4, 0.4 + 1e-12, h)
            lam = conformal_factor(ref_params, u) * (1.0 + 0.01 * u**2)
            residuals.append(
                fit_normalization(lam, ref_params.b, h).max_affine_residual
            )
        assert residuals[0] / residuals[1] < 2.0  # no O(h^2) shrink

    def test_nonzero_slope_oracle_recovered(self):
        # integrate the 4th-order form of the curvature condition with
        # initial data giving affine slope F'(0) = 2 phi'(0) = 0.2
        b = 0.5
        y0 = (0.0, 0.1, 1.0, 0.2)  # W(0) = 0.5, W'(0) = 0
        h = 1e-3
        u, phi = ricci_condition_4th_order_oracle(b, y0, 0.3, h)
        fit = fit_normalization(np.exp(phi), b, h, u0=float(u[0]))
        assert fit.c2_fit == pytest.approx(0.2, abs=1e-3)
        assert fit.max_affine_residual < 1e-5
        # the same solution passes the pointwise residual at second order
        # (coarser sampling keeps the double stencil above rounding noise)
        u_c, phi_c = ricci_condition_4th_order_oracle(b, y0, 0.3, 0.01)
        order, _ = ricci_order_1d(phi_c, b, 0.01)
        assert 1.8 <= order <= 2.2

    def test_rejects_nonpositive_samples(self):
        with pytest.raises(ParameterError):
            fit_normalization(np.array([1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0]), 0.5, 0.1)


class TestVerdictAndExport:
    def test_verdict_rule(self):
        assert in_family_verdict(1e-7, 2.0, 0.01)
        assert not in_family_verdict(1e-2, 2.0, 0.01)
        assert not in_family_verdict(1e-7, 1.0, 0.01)

    def test_csv_round_trip(self, ref_params):
        spec = GridSpec(-0.2, 0.2, -0.2, 0.2, 5, 5)
        grid = sample_grid(ref_params, spec)
        ricci_residual_grid(grid, ref_params.b)
        text = grid_to_csv(grid)
        lines = text.strip().split("\r\n")
        assert lines[0] == "u,v,lambda,K,residual"
        assert len(lines) == 1 + 25
        cells = lines[1].split(",")
        assert len(cells) == 5 and cells[4] == ""  # corner: no residual
        centre = lines[1 + 12].split(",")  # row 2, col 2 interior
        assert float(centre[2]) == pytest.approx(
            conformal_factor(ref_params, float(centre[0])), rel=1e-15
        )
        assert centre[4] != ""


def test_sweep_invariant_order_two_everywhere():
    base = GridSpec(-0.5, 0.5, -0.5, 0.5, 26, 26)  # h = 0.04, three levels to 0.01
    for p in sweep_params()[::5]:
        order = convergence_order(p, base, 3)
        assert 1.8 <= order <= 2.2, (p, order)
