"""Growth ledger of the modified energy along a perturbed trajectory.

For v_t = -i phi(D) v - (i/2) N(v + z) on the torus,

    d/dt E(Iv) = 1/2 int dx(Iv) [I(v^2) - (Iv)^2]
               + 1/2 int dx(Iv) I(P_{!=0} z^2)
               + int dx(Iv) I(vz),

with int f g = sum_n f_hat(n) g_hat(-n). Each rate is evaluated spectrally
at the trajectory nodes and integrated in time with cumulative Simpson.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from app.errors import ForcingMismatchError
from app.imethod.multiplier import IParams, apply_i, modified_energy
from app.solver.config import Trajectory, ZSource
from app.solver.propagator import cumulative_integral
from app.spectral.field import (
    SpectralField,
    apply_multiplier,
    derivative_symbol,
    zero_mode_projection,
)
from app.spectral.products import product

logger = logging.getLogger(__name__)

LEDGER_RTOL = 1e-6


def pairing(f: SpectralField, g: SpectralField) -> float:
    """Re int f g = Re sum_n f_hat(n) g_hat(-n)."""
    M = min(f.M_grid, g.M_grid)
    a = f.resize(M).coeffs
    b = g.resize(M).coeffs[::-1]
    return float(np.real(np.sum(a * b)))


def commutator_rate(v: SpectralField, p: IParams) -> float:
    """1/2 int dx(Iv) [I(v^2) - (Iv)^2]."""
    iv = apply_i(v, p)
    d_iv = apply_multiplier(iv, derivative_symbol())
    defect = apply_i(product(v, v), p) - product(iv, iv)
    return 0.5 * pairing(d_iv, defect)


def ledger_rates(
    v: SpectralField, z: SpectralField, p: IParams
) -> tuple[float, float, float]:
    iv = apply_i(v, p)
    d_iv = apply_multiplier(iv, derivative_symbol())
    rate_i = commutator_rate(v, p)
    zz = apply_multiplier(product(z, z), zero_mode_projection())
    rate_ii = 0.5 * pairing(d_iv, apply_i(zz, p))
    rate_iii = pairing(d_iv, apply_i(product(v, z), p))
    return rate_i, rate_ii, rate_iii


@dataclass
class EnergyTrace:
    times: np.ndarray
    E_values: np.ndarray
    term_I: np.ndarray
    term_II: np.ndarray
    term_III: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        growth = self.E_values - self.E_values[0]
        return growth - (self.term_I + self.term_II + self.term_III)

    def closure_error(self) -> float:
        """max_t |residual(t)| / max(1, max_t E)."""
        scale = max(1.0, float(np.max(self.E_values)))
        return float(np.max(np.abs(self.residual))) / scale

    def closes(self, rtol: float = LEDGER_RTOL) -> bool:
        return self.closure_error() < rtol

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.times,
                "E": self.E_values,
                "term_I": self.term_I,
                "term_II": self.term_II,
                "term_III": self.term_III,
                "residual": self.residual,
            }
        )


def energy_growth_decomposition(
    v_traj: Trajectory, z_source: ZSource, p: IParams
) -> EnergyTrace:
    if not z_source.same_as(v_traj.z_source):
        raise ForcingMismatchError(
            "v trajectory was not produced with this z source "
            f"({z_source.describe()})"
        )
    M = v_traj.M_grid
    energies = []
    rates = []
    for t, v in zip(v_traj.times, v_traj.states, strict=True):
        energies.append(modified_energy(v, p))
        rates.append(ledger_rates(v, z_source.at(float(t), M), p))
    rates = np.asarray(rates)
    integrals = cumulative_integral(rates, v_traj.times)
    trace = EnergyTrace(
        v_traj.times,
        np.asarray(energies),
        integrals[:, 0],
        integrals[:, 1],
        integrals[:, 2],
    )
    logger.info(
        "energy ledger at N=%g: E(T)=%.4g, closure error %.2e",
        p.N,
        trace.E_values[-1],
        trace.closure_error(),
    )
    return trace
