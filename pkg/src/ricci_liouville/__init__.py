"""Special Liouville metrics with a Ricci-type curvature condition.

Construction of the two-parameter family of conformal factors
lambda(u) = sqrt(lambda_plus) / cn(s u, k) from Jacobi elliptic functions,
finite-difference certification of the curvature condition
Delta log sqrt(-2 b^2 - K) = 2 K, the surface-of-revolution realization,
and the parameter subfamily induced by parallel mean curvature immersions
into the complex hyperbolic plane.
"""

__version__ = "0.1.0"

from .elliptic import Modulus, complete_elliptic_k, jacobi_am, jacobi_sn_cn_dn
from .errors import ConvergenceError, DomainError, NotInFamilyError, ParameterError
from .metric import (
    DerivedConstants,
    MetricParams,
    conformal_factor,
    conformal_factor_derivatives,
    derive_constants,
    gaussian_curvature,
    ode_residual,
    theta,
)
from .pmc import (
    PMC_B,
    PMC_RHO,
    PmcReport,
    SubfamilyBranch,
    amplitude_equation_check,
    kaehler_angle,
    pmc_report,
    second_fundamental_norm,
    subfamily_params,
)
from .revolution import (
    ProfileCurve,
    RevolutionMesh,
    adaptive_simpson,
    angle_defect_curvature,
    embeddable_interval,
    embeddable_interval_numeric,
    induced_metric_check,
    mesh_to_obj,
    mesh_to_ply,
    metric_from_profile,
    profile_from_conformal,
    profile_from_metric,
    profile_to_csv,
    tessellate,
)
from .verify import (
    GridSpec,
    MetricGrid,
    NormalizationFit,
    convergence_order,
    estimate_order,
    fit_normalization,
    grid_to_csv,
    in_family_verdict,
    ricci_order_1d,
    ricci_residual_1d,
    ricci_residual_grid,
    sample_grid,
    summary_to_json,
)

__all__ = [
    "__version__",
    "Modulus",
    "complete_elliptic_k",
    "jacobi_am",
    "jacobi_sn_cn_dn",
    "ConvergenceError",
    "DomainError",
    "NotInFamilyError",
    "ParameterError",
    "MetricParams",
    "DerivedConstants",
    "derive_constants",
    "conformal_factor",
    "conformal_factor_derivatives",
    "gaussian_curvature",
    "theta",
    "ode_residual",
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
    "PMC_B",
    "PMC_RHO",
    "SubfamilyBranch",
    "PmcReport",
    "subfamily_params",
    "amplitude_equation_check",
    "kaehler_angle",
    "second_fundamental_norm",
    "pmc_report",
]
