from app.inflation.bilinear import BilinearReport, bilinear_flp_probe
from app.inflation.data import (
    InflationParams,
    build_inflation_data,
    case_parameters,
    condition_values,
    f_p_of_A,
    select_parameters,
)
from app.inflation.experiment import InflationReport, run_inflation_experiment
from app.inflation.phase import phase_theta, xi1_exact
from app.inflation.series import (
    duhamel_bilinear,
    support_intervals,
    tree_sum_series,
    xi_growth_constants,
    xi_series,
)
from app.inflation.trees import TreeNode, enumerate_trees

__all__ = [
    "BilinearReport",
    "InflationParams",
    "InflationReport",
    "TreeNode",
    "bilinear_flp_probe",
    "build_inflation_data",
    "case_parameters",
    "condition_values",
    "duhamel_bilinear",
    "enumerate_trees",
    "f_p_of_A",
    "phase_theta",
    "run_inflation_experiment",
    "select_parameters",
    "support_intervals",
    "tree_sum_series",
    "xi1_exact",
    "xi_growth_constants",
    "xi_series",
]
