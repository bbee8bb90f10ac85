from app.randomdata.families import (
    FAMILIES,
    Family,
    RandomDataSpec,
    draw_coefficients,
    get_family,
    register_family,
    sample_initial_data,
)
from app.randomdata.mollifiers import (
    KERNELS,
    MollifierKernel,
    get_kernel,
    mollifier_difference_bound,
    mollify,
)
from app.randomdata.moments import (
    analytic_moment,
    chaos_moment_ratio,
    estimate_moment,
    moment_table_check,
)

__all__ = [
    "FAMILIES",
    "KERNELS",
    "Family",
    "MollifierKernel",
    "RandomDataSpec",
    "analytic_moment",
    "chaos_moment_ratio",
    "draw_coefficients",
    "estimate_moment",
    "get_family",
    "get_kernel",
    "mollifier_difference_bound",
    "mollify",
    "moment_table_check",
    "register_family",
    "sample_initial_data",
]
