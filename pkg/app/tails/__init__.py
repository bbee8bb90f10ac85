from app.tails.holder import (
    PathSample,
    chebyshev_tail_bound,
    grr_constant,
    grr_exponent,
    grr_path_bound,
    holder_seminorm,
    kolmogorov_moment_bound,
    pairwise_distances,
    tail_constant,
)
from app.tails.tails import (
    HolderReport,
    ObservableSpec,
    TailReport,
    default_lambda_grid,
    holder_domination_check,
    observable_value,
    sample_observable,
    sample_path,
    tail_check,
)

__all__ = [
    "HolderReport",
    "ObservableSpec",
    "PathSample",
    "TailReport",
    "chebyshev_tail_bound",
    "default_lambda_grid",
    "grr_constant",
    "grr_exponent",
    "grr_path_bound",
    "holder_domination_check",
    "holder_seminorm",
    "kolmogorov_moment_bound",
    "observable_value",
    "pairwise_distances",
    "sample_observable",
    "sample_path",
    "tail_check",
    "tail_constant",
]
