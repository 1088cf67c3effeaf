"""Numerical laboratory for periodic constant-scalar-curvature cylinder metrics.

The package studies two families of metrics on a circle times a sphere: the
conformally-cylindric family (a conformal factor driven by the critical
power nonlinearity) and the warped-product family with an Einstein factor.
Both reduce to a single planar Hamiltonian system; on top of it sit the
period function and its monotonicity theory, censuses of solutions per
circle length, elliptic closed forms in low dimensions, curvature
diagnostics, and a deterministic command-line interface.

A compiled quadrature/integrator kernel is used when available; a pure
Python implementation with identical semantics is selected automatically
otherwise (see ``pseudocyl.COMPILED``).
"""

from pseudocyl._backend import COMPILED, backend_name
from pseudocyl.census import (
    DerdzinskiCensus,
    DerdzinskiNormalization,
    SolutionBranch,
    UnresolvedBranch,
    bifurcation_periods,
    count_metrics,
    degenerate_length,
    derdzinski_census,
    solve_branches,
)
from pseudocyl.curvature import (
    CurvatureReport,
    ReferenceConstants,
    RicciComponents,
    SignAudit,
    codazzi_pair,
    nonparallel_witness,
    pohozaev,
    reference_constants,
    ricci_components,
    sign_audit,
    sphere_family_residual,
    witness_value,
    yamabe_functional,
)
from pseudocyl.efcore import (
    Family,
    OrbitTrajectory,
    PhaseState,
    StructuralConstants,
    SystemKind,
    denormalize,
    energy,
    homoclinic_profile,
    integrate_orbit,
    nonlinearity,
    potential,
    structural_constants,
    turning_points,
)
from pseudocyl.ellip import (
    ClosedForm,
    CurveClass,
    EstimateBounds,
    WeierstrassBranch,
    closed_form,
    curve_class,
    elliptic_K,
    estimate_bounds,
    evaluate_closed_form,
    jacobi_dn,
    raw_energy,
    real_period,
    weierstrass_p,
)
from pseudocyl.period import (
    MonotonicityReport,
    NonConvergenceError,
    chow_wang_H,
    delta_criterion,
    monotonicity_report,
    period,
    period_derivative,
    period_u,
)
from pseudocyl.verify import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "backend_name",
    "Family",
    "SystemKind",
    "PhaseState",
    "StructuralConstants",
    "OrbitTrajectory",
    "structural_constants",
    "nonlinearity",
    "potential",
    "energy",
    "turning_points",
    "integrate_orbit",
    "homoclinic_profile",
    "denormalize",
    "NonConvergenceError",
    "MonotonicityReport",
    "period",
    "period_u",
    "period_derivative",
    "chow_wang_H",
    "delta_criterion",
    "monotonicity_report",
    "SolutionBranch",
    "UnresolvedBranch",
    "DerdzinskiNormalization",
    "DerdzinskiCensus",
    "bifurcation_periods",
    "count_metrics",
    "solve_branches",
    "derdzinski_census",
    "degenerate_length",
    "WeierstrassBranch",
    "ClosedForm",
    "CurveClass",
    "EstimateBounds",
    "elliptic_K",
    "jacobi_dn",
    "weierstrass_p",
    "real_period",
    "raw_energy",
    "closed_form",
    "evaluate_closed_form",
    "curve_class",
    "estimate_bounds",
    "RicciComponents",
    "SignAudit",
    "CurvatureReport",
    "ReferenceConstants",
    "ricci_components",
    "sign_audit",
    "witness_value",
    "nonparallel_witness",
    "pohozaev",
    "yamabe_functional",
    "reference_constants",
    "codazzi_pair",
    "sphere_family_residual",
    "CheckResult",
    "run_checks",
    "__version__",
]
