import logging
import math
from dataclasses import dataclass, field

from app.inflation.data import (
    Condition,
    InflationParams,
    build_inflation_data,
    condition_values,
    f_p_of_A,
)
from app.inflation.phase import xi1_exact
from app.solver.config import SolverConfig
from app.solver.integrators import integrate_bbm
from app.solver.propagator import linear_propagator
from app.spectral.field import SpectralField
from app.spectral.norms import fourier_lebesgue_norm

logger = logging.getLogger(__name__)

AMPLIFICATION_TARGET = 10.0
PREDICTION_FACTOR = 4.0
REMAINDER_FRACTION = 0.5


@dataclass
class InflationReport:
    params: InflationParams
    perturbation_norm: float
    initial_norm: float
    final_norm: float
    xi1_norm: float
    remainder_norm: float
    remainder_bound: float
    blew_up: bool
    conditions: list[Condition] = field(default_factory=list)

    @property
    def amplification(self) -> float:
        if self.perturbation_norm == 0:
            return math.inf
        return self.final_norm / self.perturbation_norm

    @property
    def prediction_factor(self) -> float:
        """max(measured / predicted, predicted / measured)."""
        if self.final_norm == 0 or self.xi1_norm == 0:
            return math.inf
        ratio = self.final_norm / self.xi1_norm
        return max(ratio, 1.0 / ratio)

    @property
    def remainder_dominated(self) -> bool:
        return self.remainder_norm <= REMAINDER_FRACTION * self.xi1_norm

    @property
    def passed(self) -> bool:
        return (
            not self.blew_up
            and self.amplification >= AMPLIFICATION_TARGET
            and self.prediction_factor <= PREDICTION_FACTOR
            and self.remainder_dominated
        )

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "perturbation_norm": self.perturbation_norm,
            "initial_norm": self.initial_norm,
            "final_norm": self.final_norm,
            "xi1_norm": self.xi1_norm,
            "remainder_norm": self.remainder_norm,
            "remainder_bound": self.remainder_bound,
            "amplification": self.amplification,
            "prediction_factor": self.prediction_factor,
            "blew_up": self.blew_up,
            "conditions": [c.as_dict() for c in self.conditions],
        }


def run_inflation_experiment(
    u0: SpectralField,
    params: InflationParams,
    cfg: SolverConfig,
    n: int = 2,
) -> InflationReport:
    """Evolve u0 + phi_n to t = params.T and compare with the Xi_1 prediction.

    The remainder is the measured u(T) - S(T)u_0n - Xi_1(u_0n)(T); its
    bound is T^2 R^3 A^2 f_p(A).
    """
    s, p = params.s, params.p
    M = cfg.M_grid
    phi_n = build_inflation_data(params, M)
    data = u0.resize(M) + phi_n
    cfg = cfg.replace(T_final=params.T)

    traj = integrate_bbm(data, cfg)
    final = traj.final
    xi1_data = xi1_exact(data, params.T)
    remainder = final - linear_propagator(data, params.T) - xi1_data

    def norm(f: SpectralField) -> float:
        return fourier_lebesgue_norm(f, s, p)

    report = InflationReport(
        params=params,
        perturbation_norm=norm(phi_n),
        initial_norm=norm(data),
        final_norm=norm(final),
        xi1_norm=norm(xi1_exact(phi_n, params.T)),
        remainder_norm=norm(remainder),
        remainder_bound=params.T**2
        * params.R**3
        * params.A**2
        * f_p_of_A(params.A, s, p),
        blew_up=traj.blew_up,
        conditions=condition_values(params, n, fourier_lebesgue_norm(u0, 0.0, p)),
    )
    if traj.blew_up:
        logger.warning("inflation run blew up before t=%g", params.T)
    logger.info(
        "inflation N=%g: perturbation %.3g, final %.3g (x%.1f), Xi_1 %.3g",
        params.N,
        report.perturbation_norm,
        report.final_norm,
        report.amplification,
        report.xi1_norm,
    )
    return report
