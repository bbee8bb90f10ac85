"""Hölder seminorms of sampled paths and the Garsia-Rodemich-Rumsey bounds.

If U = int int d(f(t), f(t'))^q / |t - t'|^(q beta + 1) dt dt' is finite,
then d(f(t), f(t')) <= (C(beta, q) U)^(1/q) |t - t'|^(beta - 1/q) with
C(beta, q) = 32^q ((q beta + 1) / (q beta - 1))^q.
"""

import math
from dataclasses import dataclass

import numpy as np

from app.errors import DegenerateGridError, InvalidExponentError, ParameterError
from app.spectral.field import SpectralField
from app.spectral.norms import NormDescriptor

DEFAULT_Q = 8


@dataclass(eq=False)
class PathSample:
    times: np.ndarray
    states: list[SpectralField]
    observable: str = ""
    seed: int | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.states) != self.times.size:
            raise ParameterError(
                f"{len(self.states)} states for {self.times.size} times"
            )

    def check_grid(self) -> None:
        if self.times.size < 3:
            raise DegenerateGridError(
                f"need at least 3 time points, got {self.times.size}"
            )
        if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0):
            raise DegenerateGridError("time grid must increase strictly from 0")


def pairwise_distances(path: PathSample, norm: NormDescriptor) -> np.ndarray:
    """d[i, j] = norm(f(t_i) - f(t_j))."""
    n = path.times.size
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = norm(path.states[i] - path.states[j])
    return d


def holder_seminorm(
    path: PathSample, gamma: float, norm: NormDescriptor | None = None
) -> float:
    """max over grid pairs of norm(f(t) - f(t')) / |t - t'|^gamma."""
    if not 0 < gamma < 1:
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma}")
    path.check_grid()
    norm = norm or NormDescriptor()
    d = pairwise_distances(path, norm)
    gaps = np.abs(path.times[:, None] - path.times[None, :])
    off = gaps > 0
    return float(np.max(d[off] / gaps[off] ** gamma))


def grr_constant(beta: float, q: float) -> float:
    if q * beta <= 1:
        raise InvalidExponentError(f"q*beta must exceed 1, got {q * beta}")
    return 32.0**q * ((q * beta + 1.0) / (q * beta - 1.0)) ** q


def grr_exponent(beta: float, q: float) -> float:
    """The Hölder exponent beta - 1/q the GRR bound controls."""
    return beta - 1.0 / q


def _cell_widths(times: np.ndarray) -> np.ndarray:
    widths = np.empty_like(times)
    widths[1:-1] = 0.5 * (times[2:] - times[:-2])
    widths[0] = 0.5 * (times[1] - times[0])
    widths[-1] = 0.5 * (times[-1] - times[-2])
    return widths


def grr_path_bound(
    path: PathSample,
    beta: float | None = None,
    q: float = DEFAULT_Q,
    norm: NormDescriptor | None = None,
) -> float:
    """(C(beta, q) U)^(1/q), U the off-diagonal Riemann sum of the GRR integral.

    Dominates holder_seminorm(path, beta - 1/q, norm).
    """
    beta = 0.25 + 1.0 / q if beta is None else beta
    constant = grr_constant(beta, q)
    path.check_grid()
    norm = norm or NormDescriptor()
    d = pairwise_distances(path, norm)
    gaps = np.abs(path.times[:, None] - path.times[None, :])
    widths = _cell_widths(path.times)
    off = gaps > 0
    terms = np.zeros_like(d)
    terms[off] = d[off] ** q / gaps[off] ** (q * beta + 1.0)
    U = float(np.sum(terms * widths[:, None] * widths[None, :]))
    return (constant * U) ** (1.0 / q)


def kolmogorov_moment_bound(
    K: float, eta: float, beta: float, q: float, T: float
) -> float:
    """E U <= K C(beta, q) int int |t - t'|^(eta - q beta) over [0, T]^2.

    K is the constant in E d(f(t), f(t'))^q <= K |t - t'|^(1 + eta); the
    bound is finite iff q beta - eta < 1.
    """
    e = eta - q * beta
    if not e > -1:
        return math.inf
    return K * grr_constant(beta, q) * 2.0 * T ** (2.0 + e) / ((1.0 + e) * (2.0 + e))


def tail_constant(beta: float, q: float, r: float = 1.0) -> float:
    """D(beta, q) = 32^q r^q q^(q/2) / (q (1 - beta) (1 + q (1 - beta)))."""
    if not 0 < beta < 1:
        raise InvalidExponentError(f"beta must lie in (0, 1), got {beta}")
    return (
        32.0**q
        * r**q
        * q ** (q / 2.0)
        / (q * (1.0 - beta) * (1.0 + q * (1.0 - beta)))
    )


def chebyshev_tail_bound(
    D: float, lam: float, q: float, T: float, beta: float
) -> float:
    """P(seminorm > lam) <= D T^(q(1 - beta) + 1) / lam^q."""
    if lam <= 0:
        raise ParameterError(f"lam must be positive, got {lam}")
    return D * T ** (q * (1.0 - beta) + 1.0) / lam**q
