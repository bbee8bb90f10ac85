from app.solver.config import SolverConfig, Trajectory, ZSource
from app.solver.integrators import (
    convergence_ratio,
    integrate_bbm,
    integrate_perturbed,
    mollifier_gaps,
    reconstruct_solution,
    time_reversal_defect,
)
from app.solver.picard import (
    contraction_time,
    picard_iterates,
    picard_solve,
    picard_trajectory,
)
from app.solver.propagator import energy, linear_propagator, q_of_s, reflect_state

__all__ = [
    "SolverConfig",
    "Trajectory",
    "ZSource",
    "contraction_time",
    "convergence_ratio",
    "energy",
    "integrate_bbm",
    "integrate_perturbed",
    "linear_propagator",
    "mollifier_gaps",
    "picard_iterates",
    "picard_solve",
    "picard_trajectory",
    "q_of_s",
    "reconstruct_solution",
    "reflect_state",
    "time_reversal_defect",
]
