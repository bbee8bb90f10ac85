"""Picard iteration of the Duhamel map, the reference solver.

    Gamma(u)(t) = S(t) u0 - (i/2) int_0^t S(t - t') N(u(t')) dt'

is iterated from u^0(t) = S(t) u0 on a uniform node grid with cumulative
Simpson quadrature. Iterates are compared in sup_t H^1.
"""

import logging
import math

import numpy as np

from app.errors import NonContractionError
from app.nonlinearity.renormalized import nonlinearity_coeffs
from app.solver.config import SolverConfig, Trajectory
from app.solver.propagator import duhamel_rows
from app.spectral.field import SpectralField, frequencies, japanese, phi
from app.spectral.norms import fourier_lebesgue_norm

logger = logging.getLogger(__name__)

# the map contracts on [0, T] when T ||u0||_{FL^1} <= CONTRACTION_CONSTANT
CONTRACTION_CONSTANT = 1.0


def _free_rows(u0: np.ndarray, times: np.ndarray, M: int) -> np.ndarray:
    return np.exp(-1j * np.outer(times, phi(frequencies(M)))) * u0


def _apply_map(free: np.ndarray, rows: np.ndarray, times, M: int) -> np.ndarray:
    forcing = np.stack([nonlinearity_coeffs(row, M, M) for row in rows])
    return free + duhamel_rows(times, forcing, M)


def _h1_sup(rows: np.ndarray, M: int) -> float:
    weights = japanese(frequencies(M)) ** 2
    return float(np.sqrt(np.max(np.sum(weights * np.abs(rows) ** 2, axis=1))))


def _iterate_to_fixed_point(
    u0: SpectralField, times: np.ndarray, cfg: SolverConfig
) -> tuple[np.ndarray, int]:
    M = cfg.M_grid
    free = _free_rows(u0.resize(M).coeffs, times, M)
    rows = free
    residual = math.inf
    for iteration in range(1, cfg.picard_max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            new_rows = _apply_map(free, rows, times, M)
        if not np.all(np.isfinite(new_rows)):
            raise NonContractionError(
                f"Picard iterate {iteration} is not finite on [0, {times[-1]:g}]",
                iteration,
                math.inf,
            )
        residual = _h1_sup(new_rows - rows, M)
        scale = max(1.0, _h1_sup(new_rows, M))
        logger.debug("picard iteration %d: residual %.3e", iteration, residual)
        rows = new_rows
        if residual <= cfg.picard_tol * scale:
            return rows, iteration
    raise NonContractionError(
        f"Picard map did not contract on [0, {times[-1]:g}] within "
        f"{cfg.picard_max_iter} iterations (residual {residual:.3e})",
        cfg.picard_max_iter,
        residual,
    )


def _warn_outside_contraction(u0: SpectralField, T: float) -> None:
    product = T * fourier_lebesgue_norm(u0, 0.0, 1)
    if product > CONTRACTION_CONSTANT:
        logger.warning(
            "T*||u0||_FL1 = %.3g exceeds the contraction bound %.3g",
            product,
            CONTRACTION_CONSTANT,
        )


def node_times(T: float, cfg: SolverConfig) -> np.ndarray:
    return np.linspace(0.0, T, cfg.picard_nodes)


def picard_solve(u0: SpectralField, T: float, cfg: SolverConfig) -> SpectralField:
    """The fixed point at time T."""
    _warn_outside_contraction(u0, T)
    rows, iterations = _iterate_to_fixed_point(u0, node_times(T, cfg), cfg)
    logger.debug("picard_solve converged in %d iterations at T=%g", iterations, T)
    return SpectralField(rows[-1], cfg.M_grid)


def picard_trajectory(u0: SpectralField, cfg: SolverConfig) -> Trajectory:
    """The fixed point on the node grid of [0, cfg.T_final]."""
    _warn_outside_contraction(u0, cfg.T_final)
    times = node_times(cfg.T_final, cfg)
    rows, _ = _iterate_to_fixed_point(u0, times, cfg)
    states = [SpectralField(row, cfg.M_grid) for row in rows]
    return Trajectory(times, states, cfg, scheme="picard")


def picard_iterates(
    u0: SpectralField, T: float, cfg: SolverConfig, n_iterates: int
) -> list[Trajectory]:
    """u^0 = S(t)u0, u^1, ..., u^n_iterates on the node grid of [0, T].

    u^1 equals Xi_0 + Xi_1 of the power series; from u^2 on the iterate
    also carries terms of order above its index.
    """
    M = cfg.M_grid
    times = node_times(T, cfg)
    free = _free_rows(u0.resize(M).coeffs, times, M)
    rows = free
    iterates = []
    for _ in range(n_iterates + 1):
        states = [SpectralField(row, M) for row in rows]
        iterates.append(Trajectory(times, states, cfg, scheme="picard"))
        rows = _apply_map(free, rows, times, M)
    return iterates


def _contracts(u0: SpectralField, T: float, cfg: SolverConfig) -> bool:
    try:
        _iterate_to_fixed_point(u0, node_times(T, cfg), cfg)
    except NonContractionError:
        return False
    return True


def contraction_time(
    u0: SpectralField,
    cfg: SolverConfig,
    t_max: float | None = None,
    rel_tol: float = 0.02,
) -> float:
    """Largest T (to rel_tol) on which the Picard iteration converges.

    Bracketed by doubling from 1/||u0||_{FL^1} up to t_max, then bisected.
    """
    size = fourier_lebesgue_norm(u0, 0.0, 1)
    if size == 0.0:
        return math.inf
    t_max = 64.0 / size if t_max is None else t_max
    lo, hi = 0.0, min(CONTRACTION_CONSTANT / size, t_max)
    while _contracts(u0, hi, cfg):
        lo = hi
        if hi >= t_max:
            logger.warning("Picard still contracts at t_max=%g", t_max)
            return t_max
        hi = min(2.0 * hi, t_max)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if _contracts(u0, mid, cfg):
            lo = mid
        else:
            hi = mid
    logger.info("contraction time %.4g for ||u0||_FL1 = %.4g", lo, size)
    return lo
