from app.nonlinearity.diagnostics import (
    NonlinearityReport,
    ck_divergence,
    kernel_independence,
    nz_convergence,
    nz_second_moment,
    quartic_bound_check,
    second_order_term,
    sharpness_divergence,
    sharpness_variance,
    zero_mode_constant,
    zero_mode_time_invariance,
)
from app.nonlinearity.renormalized import renormalized_nonlinearity

__all__ = [
    "NonlinearityReport",
    "ck_divergence",
    "kernel_independence",
    "nz_convergence",
    "nz_second_moment",
    "quartic_bound_check",
    "renormalized_nonlinearity",
    "second_order_term",
    "sharpness_divergence",
    "sharpness_variance",
    "zero_mode_constant",
    "zero_mode_time_invariance",
]
