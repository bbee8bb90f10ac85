"""Inflation data and the parameter recipes that make it inflate.

The data is R times the indicator of the integer points of +-N + [-2A, 2A].
Its evolution grows in FL^{s,p} when six numeric conditions hold:

    (i)   R A^(1/p) N^s < 1/n           (iv)  ||u0||_{FL^p} < R f_p(A) / 10
    (ii)  T R A f_p(A) < 0.1            (v)   A < N / 8
    (iii) T R^2 A > n                   (vi)  T < A / 10

All condition arithmetic is done on logarithms, so searches can reach
N = 2^1000.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError, ParameterSearchError, TruncationError
from app.spectral.field import SpectralField

logger = logging.getLogger(__name__)

SEARCH_MIN_LOG2 = 2
SEARCH_MAX_LOG2 = 1000


@dataclass(frozen=True)
class InflationParams:
    N: float
    A: float
    R: float
    T: float
    s: float
    p: float
    case: int
    delta: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if min(self.N, self.A, self.R, self.T) <= 0:
            raise ParameterError("N, A, R and T must be positive")
        _check_exponents(self.s, self.p)
        if self.case not in (1, 2, 3):
            raise ParameterError(f"case must be 1, 2 or 3, got {self.case}")

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "A": self.A,
            "R": self.R,
            "T": self.T,
            "s": self.s,
            "p": self.p,
            "case": self.case,
            "delta": self.delta,
            "theta": self.theta,
        }


def _check_exponents(s: float, p: float) -> None:
    if not s < 0:
        raise ParameterError(f"s must be negative, got {s}")
    if not 1 <= p < math.inf:
        raise ParameterError(f"p must lie in [1, inf), got {p}")


def case_of(s: float, p: float) -> int:
    _check_exponents(s, p)
    if math.isclose(s, -1.0 / p, rel_tol=1e-12):
        return 2
    return 1 if s < -1.0 / p else 3


def _log_f_p(log_A: float, s: float, p: float) -> float:
    case = case_of(s, p)
    if case == 1:
        return 0.0
    if case == 2:
        return math.log(log_A) / p if log_A > 0 else -math.inf
    return (1.0 / p + s) * log_A


def f_p_of_A(A: float, s: float, p: float) -> float:
    """1 if s < -1/p, (log A)^(1/p) if s = -1/p, A^(1/p + s) otherwise."""
    if A < 1:
        raise ParameterError(f"A must be >= 1, got {A}")
    return math.exp(_log_f_p(math.log(A), s, p))


@dataclass(frozen=True)
class Condition:
    name: str
    log_lhs: float
    log_rhs: float

    @property
    def holds(self) -> bool:
        return self.log_lhs < self.log_rhs

    @property
    def lhs(self) -> float:
        return _safe_exp(self.log_lhs)

    @property
    def rhs(self) -> float:
        return _safe_exp(self.log_rhs)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
        }


def _safe_exp(x: float) -> float:
    return math.inf if x > 709 else math.exp(x)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _conditions_from_logs(
    logs: tuple[float, float, float, float],
    s: float,
    p: float,
    n: int,
    u0norm: float,
) -> list[Condition]:
    log_N, log_A, log_R, log_T = logs
    log_f = _log_f_p(log_A, s, p)
    log_n = math.log(n)
    return [
        Condition("(i) R A^(1/p) N^s < 1/n", log_R + log_A / p + s * log_N, -log_n),
        Condition(
            "(ii) T R A f_p(A) < 0.1", log_T + log_R + log_A + log_f, math.log(0.1)
        ),
        Condition("(iii) T R^2 A > n", log_n, log_T + 2 * log_R + log_A),
        Condition(
            "(iv) ||u0||_FLp < R f_p(A)/10",
            _log(u0norm),
            log_R + log_f - math.log(10.0),
        ),
        Condition("(v) A < N/8", log_A, log_N - math.log(8.0)),
        Condition("(vi) T < A/10", log_T, log_A - math.log(10.0)),
    ]


def condition_values(
    params: InflationParams, n: int, u0norm: float = 0.0
) -> list[Condition]:
    logs = (
        math.log(params.N),
        math.log(params.A),
        math.log(params.R),
        math.log(params.T),
    )
    return _conditions_from_logs(logs, params.s, params.p, n, u0norm)


def default_exponents(s: float, p: float) -> tuple[float, float | None]:
    """(delta, theta) of the recipe for the case (s, p) falls in."""
    case = case_of(s, p)
    if case == 1:
        return min(0.2, 0.9 * (-s - 1.0 / p) / (2.0 - 1.0 / p)), None
    if case == 2:
        return None, None
    delta = 1.0 / (3.0 * p)
    theta = delta / 10.0
    for _ in range(60):
        if _case3_admissible(s, p, delta, theta):
            return delta, theta
        delta /= 2.0
        theta /= 2.0
    raise ParameterError(f"no admissible (delta, theta) found for s={s}, p={p}")


def _case3_admissible(s: float, p: float, delta: float, theta: float) -> bool:
    bound = max(2 * (theta + delta) / (1 + delta * p), 1.5 * theta - (p - 1) * delta)
    return 0 < theta < delta <= 1.0 / (3.0 * p) and -s > bound


def _recipe_logs(
    s: float,
    p: float,
    log_N: float,
    delta: float | None,
    theta: float | None,
    scales: tuple[float, float, float],
) -> tuple[float, float, float, float]:
    log_cA, log_cR, log_cT = (math.log(c) for c in scales)
    case = case_of(s, p)
    if case == 1:
        log_A = (1 - delta) * log_N
        log_R = 2 * delta * log_N
        log_T = -(1 + 2 * delta) * log_N
    elif case == 2:
        log_log_N = math.log(log_N)
        log_q = log_N - log_log_N
        log_A = 0.5 * log_q
        log_R = log_q / (2 * p)
        log_T = -(1 + p) / (2 * p) * log_N - (3 - p) / (2 * p) * log_log_N
    else:
        log_A = delta * p * log_N
        log_R = (-s - delta - theta) * log_N
        log_T = (2 * s + 3 * theta + (2 - p) * delta) * log_N
    return log_N, log_A + log_cA, log_R + log_cR, log_T + log_cT


def _resolve_exponents(s, p, delta, theta) -> tuple[float | None, float | None]:
    case = case_of(s, p)
    default_delta, default_theta = default_exponents(s, p)
    delta = default_delta if delta is None else delta
    theta = default_theta if theta is None else theta
    if case == 1 and not 1.0 / p + (2.0 - 1.0 / p) * delta < -s:
        raise ParameterError(f"delta={delta} too large for case 1 at s={s}, p={p}")
    if case == 3 and not _case3_admissible(s, p, delta, theta):
        raise ParameterError(f"(delta, theta)=({delta}, {theta}) not admissible")
    return delta, theta


def case_parameters(
    s: float,
    p: float,
    N: float,
    delta: float | None = None,
    theta: float | None = None,
    c_A: float = 1.0,
    c_R: float = 1.0,
    c_T: float = 1.0,
) -> InflationParams:
    """The recipe of the case (s, p) falls in, evaluated at N.

    c_A, c_R, c_T scale A, R and T; the recipes fix only their N-dependence.
    """
    delta, theta = _resolve_exponents(s, p, delta, theta)
    logs = _recipe_logs(s, p, math.log(N), delta, theta, (c_A, c_R, c_T))
    N, A, R, T = (math.exp(x) for x in logs)
    return InflationParams(N, A, R, T, s, p, case_of(s, p), delta, theta)


def select_parameters(
    s: float,
    p: float,
    n: int,
    delta: float | None = None,
    theta: float | None = None,
    u0norm: float = 0.0,
    max_log2_N: int = SEARCH_MAX_LOG2,
) -> InflationParams:
    """Recipe parameters at the smallest power-of-two N meeting all conditions."""
    delta, theta = _resolve_exponents(s, p, delta, theta)
    failing: list[str] = []
    for k in range(SEARCH_MIN_LOG2, max_log2_N + 1):
        logs = _recipe_logs(s, p, k * math.log(2.0), delta, theta, (1.0, 1.0, 1.0))
        conditions = _conditions_from_logs(logs, s, p, n, u0norm)
        failing = [c.name for c in conditions if not c.holds]
        if not failing:
            N, A, R, T = (math.exp(x) for x in logs)
            if min(A, R, T) <= 0 or not math.isfinite(N):
                raise ParameterSearchError(
                    f"parameters at N=2^{k} are not representable", "representable"
                )
            logger.info("selected N=2^%d for s=%s, p=%s, n=%d", k, s, p, n)
            return InflationParams(N, A, R, T, s, p, case_of(s, p), delta, theta)
    raise ParameterSearchError(
        f"no N <= 2^{max_log2_N} satisfies all conditions; failing: {failing}",
        failing[0],
    )


def build_inflation_data(params: InflationParams, M_grid: int) -> SpectralField:
    """R on the integer points of +-N + [-2 floor(A), 2 floor(A)]."""
    if params.A >= params.N:
        raise ParameterError(f"A={params.A} must be below N={params.N}")
    N = int(round(params.N))
    width = 2 * int(math.floor(params.A))
    if N + width > M_grid:
        raise TruncationError(
            f"inflation data reaches frequency {N + width} beyond M_grid={M_grid}"
        )
    positive = np.zeros(M_grid + 1, dtype=complex)
    positive[max(N - width, 0) : N + width + 1] = params.R
    return SpectralField.from_nonnegative(positive)
