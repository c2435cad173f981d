"""Nystrom discretization, Fredholm determinants, sigma functions and continuation probes."""

from .continuation import ContinuationMap, PoleCandidate, analytic_continuation_probe, real_pole_scan
from .quadrature import (
    DiscretizedOperator,
    SmoothKernel,
    fredholm_det,
    fredholm_det_eig,
    nystrom_build,
    operator_norm,
    resolvent_bilinear,
)
from .sigma import (
    SigmaTrace,
    ode_residual,
    parity_split,
    sigma_p3,
    sigma_p5,
    sigma_p5_routes,
    sigma_trace_p3,
    sigma_trace_p5,
)

__all__ = [
    "ContinuationMap",
    "DiscretizedOperator",
    "PoleCandidate",
    "SigmaTrace",
    "SmoothKernel",
    "analytic_continuation_probe",
    "fredholm_det",
    "fredholm_det_eig",
    "nystrom_build",
    "ode_residual",
    "operator_norm",
    "parity_split",
    "real_pole_scan",
    "resolvent_bilinear",
    "sigma_p3",
    "sigma_p5",
    "sigma_p5_routes",
    "sigma_trace_p3",
    "sigma_trace_p5",
]
