from app.stats.ensemble import map_members, member_seed, member_seeds
from app.stats.montecarlo import (
    Estimate,
    LinearFit,
    estimate_mean,
    estimate_root_moment,
    fit_increment_slope,
    fit_line,
    fit_loglog,
    largest_rise,
)

__all__ = [
    "Estimate",
    "LinearFit",
    "estimate_mean",
    "estimate_root_moment",
    "fit_increment_slope",
    "fit_line",
    "fit_loglog",
    "largest_rise",
    "map_members",
    "member_seed",
    "member_seeds",
]
