"""Spectral stability of compressive Navier-Stokes boundary layers via Evans functions.

Typical use::

    from blevans import LayerParams, EvansEvaluator, semicircle, winding_number

    params = LayerParams.create(gamma=5/3, v_plus=1e-3, v0=0.4, side="inflow")
    report = winding_number(EvansEvaluator(params), semicircle(10.0, 60))
    report.winding  # 0: no unstable eigenvalues inside the half disk
"""
from .analysis import RealAxisScan, limit_comparison, real_axis_scan, stability_index, vstar
from .contour import Contour, WindingReport, hf_bound, semicircle, winding_number
from .eigensystem import (
    CoeffMatrix,
    MatrixKind,
    Mode,
    asymptotic_modes,
    coeff_matrix,
    endpoint_matrix,
    limiting_adjoint_direction,
    scalar_f,
    scalar_h,
)
from .errors import (
    BLEvansError,
    ConfigError,
    DegenerateIndexError,
    DomainError,
    EigenvalueCollisionError,
    IntegrationError,
    NearZeroError,
    NumericalError,
    OrderingError,
    RefinementCapError,
    ShootingOverflowError,
    SplittingError,
)
from .evans import (
    BoundaryData,
    EvansEvaluator,
    EvansSample,
    ShootingOptions,
    Variant,
    boundary_data,
    boundary_mismatch,
    evans_inflow,
    evans_limit,
    evans_outflow,
    shock_correction,
    shoot_adjoint_inflow,
    shoot_unstable_outflow,
)
from .harness import ConvergenceTable, SweepConfig, SweepRecord, convergence_study, emit_plot, run_sweep
from .kato import KatoFrame, kato_continue, seed_frame
from .params import LayerParams, Side, derive_constants, profile_rhs
from .profile import Profile, limiting_profile, solve_profile

__version__ = "0.1.0"

__all__ = [
    # parameters and profiles
    "LayerParams",
    "Side",
    "derive_constants",
    "profile_rhs",
    "Profile",
    "solve_profile",
    "limiting_profile",
    # eigen-structure
    "CoeffMatrix",
    "MatrixKind",
    "Mode",
    "scalar_h",
    "scalar_f",
    "coeff_matrix",
    "endpoint_matrix",
    "asymptotic_modes",
    "limiting_adjoint_direction",
    "KatoFrame",
    "seed_frame",
    "kato_continue",
    # Evans functions
    "Variant",
    "EvansSample",
    "EvansEvaluator",
    "ShootingOptions",
    "BoundaryData",
    "boundary_data",
    "shoot_adjoint_inflow",
    "shoot_unstable_outflow",
    "evans_inflow",
    "evans_outflow",
    "evans_limit",
    "shock_correction",
    "boundary_mismatch",
    # contours and analysis
    "Contour",
    "WindingReport",
    "hf_bound",
    "semicircle",
    "winding_number",
    "RealAxisScan",
    "real_axis_scan",
    "stability_index",
    "vstar",
    "limit_comparison",
    # harness
    "SweepConfig",
    "SweepRecord",
    "ConvergenceTable",
    "run_sweep",
    "convergence_study",
    "emit_plot",
    # errors
    "BLEvansError",
    "ConfigError",
    "DomainError",
    "OrderingError",
    "NumericalError",
    "IntegrationError",
    "ShootingOverflowError",
    "SplittingError",
    "EigenvalueCollisionError",
    "NearZeroError",
    "RefinementCapError",
    "DegenerateIndexError",
]
