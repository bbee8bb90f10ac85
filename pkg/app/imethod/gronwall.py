"""Gronwall arithmetic for f' <= a f + b f^gamma and the blow-up time bound.

With x = (1 - gamma) a t the maximal solution of the equality case is

    f(t) = [c^(1-gamma) e^x + (b/a)(e^x - 1)]^(1/(1-gamma)).

The predictor evaluates the time at which this bound, with the energy
inequality E <= C[phi^(1/2) Lambda int E + N^(1-2alpha+eps/2) int E^(1/2)],
reaches the ceiling C N^(2-eps).
"""

import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

from app.errors import ParameterError
from app.imethod.ledger import EnergyTrace
from app.imethod.multiplier import IParams, apply_i
from app.solver.propagator import cumulative_integral
from app.spectral.field import SpectralField
from app.spectral.norms import sobolev_norm
from app.spectral.sums import phi_beta

logger = logging.getLogger(__name__)

# below this a, (e^x - 1)/a is replaced by its series
SMALL_RATE = 1e-8


def _check(c: float, a: float, b: float, gamma: float) -> None:
    if c < 0 or a < 0 or b < 0:
        raise ParameterError(f"c, a, b must be non-negative, got {(c, a, b)}")
    if not 0 <= gamma < 1:
        raise ParameterError(f"gamma must lie in [0, 1), got {gamma}")


def gronwall_bound(c: float, a: float, b: float, gamma: float, t: float) -> float:
    _check(c, a, b, gamma)
    if t < 0:
        raise ParameterError(f"t must be non-negative, got {t}")
    r = 1.0 - gamma
    x = r * a * t
    if a < SMALL_RATE:
        # (b/a)(e^x - 1) = b r t (1 + x/2 + x^2/6 + ...)
        forced = b * r * t * (1.0 + x / 2.0 + x * x / 6.0)
    else:
        forced = (b / a) * math.expm1(x)
    return (c**r * math.exp(x) + forced) ** (1.0 / r)


def gronwall_crossing_time(
    c: float, a: float, b: float, gamma: float, ceiling: float
) -> float:
    """First t with gronwall_bound(c, a, b, gamma, t) = ceiling."""
    _check(c, a, b, gamma)
    if ceiling <= c:
        return 0.0
    if b == 0:
        # pure exponential growth c e^(a t)
        if a == 0 or c == 0:
            return math.inf
        return math.log(ceiling / c) / a
    r = 1.0 - gamma
    if a < SMALL_RATE:
        return (ceiling**r - c**r) / (b * r)
    ratio = b / a
    return math.log((ceiling**r + ratio) / (c**r + ratio)) / (r * a)


def gronwall_ode_oracle(
    c: float, a: float, b: float, gamma: float, t: float
) -> float:
    """f(t) for f' = a f + b f^gamma, f(0) = c > 0, integrated numerically."""
    _check(c, a, b, gamma)
    if c <= 0:
        raise ParameterError("the ODE oracle needs c > 0")
    solution = solve_ivp(
        lambda _, f: a * f + b * np.abs(f) ** gamma,
        (0.0, t),
        [c],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    return float(solution.y[0, -1])


def energy_ceiling(N: float, epsilon: float, C: float = 1.0) -> float:
    return C * N ** (2.0 - epsilon)


def blowup_time_predictor(
    K: float,
    Lambda: float,
    N: float,
    alpha: float,
    epsilon: float = 0.01,
    C: float = 1.0,
) -> float:
    """2 log(1 + C^(1/2) N^(2alpha-eps) phi^(1/2) Lambda) / (C phi^(1/2) Lambda).

    phi = phi_{2 alpha}(N); the constant in force is K * C.
    """
    if min(K, Lambda, N, C) <= 0:
        raise ParameterError("K, Lambda, N and C must be positive")
    C_eff = K * C
    root_phi = math.sqrt(phi_beta(int(N), 2 * alpha))
    growth = C_eff * root_phi * Lambda
    lift = math.sqrt(C_eff) * N ** (2 * alpha - epsilon) * root_phi * Lambda
    return 2.0 * math.log1p(lift) / growth


def predictor_as_crossing(
    Lambda: float, N: float, alpha: float, epsilon: float = 0.01, C: float = 1.0
) -> float:
    """The same bound read as a Gronwall crossing time with gamma = 1/2."""
    root_phi = math.sqrt(phi_beta(int(N), 2 * alpha))
    return gronwall_crossing_time(
        0.0,
        C * Lambda * root_phi,
        C * N ** (1.0 - 2 * alpha + epsilon / 2.0),
        0.5,
        energy_ceiling(N, epsilon, C),
    )


def calibrate_constant(
    trace: EnergyTrace, N: float, alpha: float, Lambda: float, epsilon: float = 0.01
) -> float:
    """Smallest C with E(t) <= C [phi^(1/2) Lambda int E + N^(...) int E^(1/2)]."""
    root_phi = math.sqrt(phi_beta(int(N), 2 * alpha))
    E = np.maximum(trace.E_values, 0.0)
    int_e = cumulative_integral(E, trace.times)
    int_root = cumulative_integral(np.sqrt(E), trace.times)
    rhs = root_phi * Lambda * int_e + N ** (1.0 - 2 * alpha + epsilon / 2.0) * int_root
    positive = rhs[1:] > 0
    if not np.any(positive):
        return 0.0
    return float(np.max(E[1:][positive] / rhs[1:][positive]))


def observed_crossing_time(trace: EnergyTrace, ceiling: float) -> float:
    """First node where E(Iv) reaches the ceiling, inf if it never does."""
    hits = np.flatnonzero(trace.E_values >= ceiling)
    return float(trace.times[hits[0]]) if hits.size else math.inf


def lambda_statistic(u0: SpectralField, p: IParams, alpha: float) -> float:
    """||I u0||_{L^2} / (2^(1/2) phi_{2 alpha}(N)^(1/2))."""
    denom = math.sqrt(2.0 * phi_beta(int(p.N), 2 * alpha))
    return sobolev_norm(apply_i(u0, p), 0.0) / denom


def cutoff_for_horizon(T: float, C: float) -> float:
    """N = exp(4 T^2 / C^2), the cutoff whose predicted time reaches T."""
    if C <= 0:
        raise ParameterError(f"C must be positive, got {C}")
    return math.exp(4.0 * T * T / (C * C))
