"""Intrinsic metrics on the unit ball, the half-space and planar sectors,
with distortion bounds under conformal and quasiregular maps."""
from .bounds import (
    JSTAR_THRESHOLD,
    Interval,
    RadiusWindow,
    conf_quotient_bounds,
    conf_quotient_bounds_midpointfree,
    conformal_distortion_bounds,
    fixed_conformal_constants,
    halfspace_barrlund_bounds,
    hypmidrot_bounds,
    ratio_bounds_vs_half_rho,
    sector_w_power_bounds,
    ta_image_window,
)
from .errors import (
    ConvergenceFailure,
    DegenerateMap,
    DomainMembership,
    InvalidParameter,
    InvalidWindow,
    MetricsLabError,
    NonConvexDomain,
    PoleAtInput,
    UnsupportedCombination,
    UnsupportedDimension,
    ValidationError,
)
from .experiments import compare_bound_methods, grid_lu, inequality_fuzz, schwarz_fuzz, sup_distortion_estimate
from .geometry import Domain, boundary_distance
from .metrics import MetricKind, barrlund, evaluate, j_family, p_function, rho, s_metric, th_half_rho, w_quasi
from .moebius import MoebiusMap, disk_image_radii, hyperbolic_midpoint, make_ta
from .schwarz import Dilatation, c_of_k, dkqr_bounds, elliptic_k, jpqr_bounds, mu, mu_inverse, phi_k2, schwarz_rho_bounds

__version__ = "0.1.0"

__all__ = [
    "ConvergenceFailure",
    "DegenerateMap",
    "Dilatation",
    "Domain",
    "DomainMembership",
    "Interval",
    "InvalidParameter",
    "InvalidWindow",
    "JSTAR_THRESHOLD",
    "MetricKind",
    "MetricsLabError",
    "MoebiusMap",
    "NonConvexDomain",
    "PoleAtInput",
    "RadiusWindow",
    "UnsupportedCombination",
    "UnsupportedDimension",
    "ValidationError",
    "barrlund",
    "boundary_distance",
    "c_of_k",
    "compare_bound_methods",
    "conf_quotient_bounds",
    "conf_quotient_bounds_midpointfree",
    "conformal_distortion_bounds",
    "disk_image_radii",
    "dkqr_bounds",
    "elliptic_k",
    "evaluate",
    "fixed_conformal_constants",
    "grid_lu",
    "halfspace_barrlund_bounds",
    "hyperbolic_midpoint",
    "hypmidrot_bounds",
    "inequality_fuzz",
    "j_family",
    "jpqr_bounds",
    "make_ta",
    "mu",
    "mu_inverse",
    "p_function",
    "phi_k2",
    "ratio_bounds_vs_half_rho",
    "rho",
    "s_metric",
    "schwarz_fuzz",
    "schwarz_rho_bounds",
    "sector_w_power_bounds",
    "sup_distortion_estimate",
    "ta_image_window",
    "th_half_rho",
    "w_quasi",
]
