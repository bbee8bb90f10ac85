"""Integrating-factor RK4 for the Galerkin BBM system.

With E(tau) = S(tau), a step from u_n integrates w(tau) = E(-tau) u(t_n + tau)
so the linear flow is exact and only the nonlinear term is approximated:

    F(tau, w) = E(-tau) (-i/2) N(E(tau) w + z(t_n + tau))

and u_{n+1} = E(dt) [u_n + dt/6 (k1 + 2 k2 + 2 k3 + k4)]. For the full flow
z is absent; for the perturbed equation z(t) = S(t) z0 is evaluated exactly
at every stage time.
"""

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from app.errors import ForcingMismatchError, ParameterError
from app.nonlinearity.renormalized import nonlinearity_coeffs
from app.solver.config import SolverConfig, Trajectory, ZSource
from app.solver.picard import picard_trajectory
from app.solver.propagator import phases, reflect_state
from app.spectral.field import SpectralField, frequencies, phi
from app.spectral.norms import sobolev_norm

logger = logging.getLogger(__name__)

Forcing = Callable[[float], np.ndarray] | None


def _stage(w: np.ndarray, tau: float, t: float, M: int, forcing: Forcing):
    ahead = phases(tau, M)
    u = ahead * w
    if forcing is not None:
        u = u + forcing(t + tau)
    return np.conj(ahead) * (-0.5j) * nonlinearity_coeffs(u, M, M)


def if_rk4_step(
    u: np.ndarray, t: float, dt: float, M: int, forcing: Forcing = None
) -> np.ndarray:
    half = 0.5 * dt
    k1 = _stage(u, 0.0, t, M, forcing)
    k2 = _stage(u + half * k1, half, t, M, forcing)
    k3 = _stage(u + half * k2, half, t, M, forcing)
    k4 = _stage(u + dt * k3, dt, t, M, forcing)
    return phases(dt, M) * (u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def _blown_up(u: np.ndarray, threshold: float) -> bool:
    return not np.all(np.isfinite(u)) or float(np.max(np.abs(u))) > threshold


def _march(
    start: np.ndarray, cfg: SolverConfig, forcing: Forcing, label: str
) -> tuple[np.ndarray, list[SpectralField], bool]:
    M = cfg.M_grid
    times = cfg.time_grid()
    u = start
    states = [SpectralField(u, M)]
    for i in range(times.size - 1):
        t, dt = times[i], times[i + 1] - times[i]
        u = if_rk4_step(u, t, dt, M, forcing)
        if _blown_up(u, cfg.blowup_threshold):
            logger.warning(
                "%s blew up at t=%.6g (step %d); returning partial trajectory",
                label,
                times[i + 1],
                i + 1,
            )
            return times[: i + 1], states, True
        states.append(SpectralField(u, M))
    return times, states, False


def integrate_bbm(u0: SpectralField, cfg: SolverConfig) -> Trajectory:
    """Evolve u_t = -i phi(D) u - (i/2) N(u) on |n| <= cfg.M_grid."""
    if cfg.scheme == "picard":
        return picard_trajectory(u0, cfg)
    start = u0.resize(cfg.M_grid).coeffs.copy()
    times, states, blew_up = _march(start, cfg, None, "integrate_bbm")
    logger.debug("integrate_bbm: %d steps at M=%d", times.size - 1, cfg.M_grid)
    return Trajectory(times, states, cfg, blew_up)


def integrate_perturbed(z_source: ZSource, cfg: SolverConfig) -> Trajectory:
    """Evolve v from 0 under v_t = -i phi(D) v - (i/2) N(v + z)."""
    if cfg.scheme != "if-rk4":
        raise ParameterError("integrate_perturbed supports the if-rk4 scheme only")
    M = cfg.M_grid
    z0 = z_source.initial(M).coeffs
    symbol = phi(frequencies(M))

    def forcing(t: float) -> np.ndarray:
        return np.exp(-1j * t * symbol) * z0

    start = np.zeros(2 * M + 1, dtype=complex)
    times, states, blew_up = _march(start, cfg, forcing, "integrate_perturbed")
    return Trajectory(times, states, cfg, blew_up, z_source=z_source)


def reconstruct_solution(v_traj: Trajectory) -> Trajectory:
    """u = z + v on the grid of a perturbed trajectory."""
    if v_traj.z_source is None:
        raise ForcingMismatchError("trajectory carries no z source to add back")
    M = v_traj.M_grid
    states = [
        v + v_traj.z_source.at(float(t), M)
        for t, v in zip(v_traj.times, v_traj.states, strict=True)
    ]
    return Trajectory(v_traj.times, states, v_traj.config, v_traj.blew_up)


def time_reversal_defect(u0: SpectralField, cfg: SolverConfig) -> float:
    """||R u(T; R u(T; u0)) - u0||_{H^1}, R the reflection x -> -x."""
    forward = integrate_bbm(u0, cfg).final
    back = integrate_bbm(reflect_state(forward), cfg).final
    return sobolev_norm(reflect_state(back) - u0.resize(cfg.M_grid), 1.0)


def convergence_ratio(u0: SpectralField, cfg: SolverConfig) -> float:
    """err(dt) / err(dt/2) at T_final in H^1, against a dt/8 reference.

    Fourth order gives 16.
    """
    reference = integrate_bbm(u0, cfg.replace(dt=cfg.dt / 8)).final
    errors = [
        sobolev_norm(integrate_bbm(u0, cfg.replace(dt=dt)).final - reference, 1.0)
        for dt in (cfg.dt, cfg.dt / 2)
    ]
    logger.debug("step errors %.3e, %.3e at dt=%g", errors[0], errors[1], cfg.dt)
    if errors[1] == 0.0:
        return math.inf
    return errors[0] / errors[1]


def mollifier_gaps(
    u0z: SpectralField,
    k_list: Sequence[float],
    cfg: SolverConfig,
    kernels: tuple[str, str] = ("fejer", "gaussian-symbol"),
    s: float = 0.5,
) -> np.ndarray:
    """||v_k(T) under the first kernel - v_k(T) under the second||_{H^s} per k.

    Both limits agree when the gaps shrink as k doubles.
    """
    first, second = kernels
    gaps = []
    for k in k_list:
        a = integrate_perturbed(ZSource(u0z, first, k), cfg).final
        b = integrate_perturbed(ZSource(u0z, second, k), cfg).final
        gaps.append(sobolev_norm(a - b, s))
        logger.debug("mollifier gap %.3e at k=%g", gaps[-1], k)
    return np.array(gaps)
