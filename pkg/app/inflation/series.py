"""Power series of the solution indexed by binary trees.

Xi_0(t) = S(t) u0 and Xi_j = sum_{j1 + j2 = j - 1} I[Xi_j1, Xi_j2] with the
Duhamel operator

    I[u1, u2](t) = -(i/2) int_0^t S(t - t') phi(D)(u1 u2)(t') dt'.

Terms are carried as coefficient rows on a uniform node grid of [0, t];
products are truncated to the band of the data, the Galerkin projection the
solvers use.
"""

import logging

import numpy as np

from app.errors import GridMismatchError, ParameterError
from app.inflation.trees import TreeNode, enumerate_trees
from app.solver.config import SolverConfig, Trajectory
from app.solver.propagator import duhamel_rows
from app.spectral.field import SpectralField, frequencies, phi
from app.spectral.norms import fourier_lebesgue_norm
from app.spectral.products import product_coeffs_fft

logger = logging.getLogger(__name__)

# the series converges on [0, t] when t ||u0||_{FL^1} stays below this
SERIES_CONSTANT = 1.0


def _bilinear_rows(
    rows1: np.ndarray, rows2: np.ndarray, times: np.ndarray, M: int
) -> np.ndarray:
    symbol = phi(frequencies(M))
    forcing = np.stack(
        [
            symbol * product_coeffs_fft(a, b, M, M)
            for a, b in zip(rows1, rows2, strict=True)
        ]
    )
    return duhamel_rows(times, forcing, M)


def duhamel_bilinear(
    u1_traj: Trajectory, u2_traj: Trajectory, t: float
) -> SpectralField:
    """I[u1, u2](t) by Simpson quadrature over the nodes up to t."""
    if not u1_traj.same_grid(u2_traj):
        raise GridMismatchError("trajectories are sampled on different grids")
    if u1_traj.M_grid != u2_traj.M_grid:
        raise GridMismatchError("trajectories have different truncations")
    k = u1_traj.index_of(t)
    if k == 0:
        return SpectralField.zeros(u1_traj.M_grid)
    rows = _bilinear_rows(
        u1_traj.coefficient_rows()[: k + 1],
        u2_traj.coefficient_rows()[: k + 1],
        u1_traj.times[: k + 1],
        u1_traj.M_grid,
    )
    return SpectralField(rows[-1], u1_traj.M_grid)


def linear_rows(u0: SpectralField, times: np.ndarray) -> np.ndarray:
    """S(t) u0 at every node."""
    return np.exp(-1j * np.outer(times, phi(u0.n))) * u0.coeffs


def _node_times(t: float, n_nodes: int) -> np.ndarray:
    if n_nodes < 3:
        raise ParameterError(f"n_nodes must be at least 3, got {n_nodes}")
    return np.linspace(0.0, t, n_nodes)


def _warn_regime(u0: SpectralField, t: float) -> None:
    size = t * fourier_lebesgue_norm(u0, 0.0, 1)
    if size >= SERIES_CONSTANT:
        logger.warning(
            "t*||u0||_FL1 = %.3g is outside the series convergence regime", size
        )


def xi_series_rows(
    u0: SpectralField, t: float, j_max: int, n_nodes: int = 201
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Node times and the rows of Xi_0..Xi_j_max."""
    if j_max < 0:
        raise ParameterError(f"j_max must be non-negative, got {j_max}")
    _warn_regime(u0, t)
    times = _node_times(t, n_nodes)
    M = u0.M_grid
    terms = [linear_rows(u0, times)]
    for j in range(1, j_max + 1):
        total = np.zeros_like(terms[0])
        for j1 in range(j):
            j2 = j - 1 - j1
            if j1 > j2:
                break
            pair = _bilinear_rows(terms[j1], terms[j2], times, M)
            total += pair if j1 == j2 else 2.0 * pair
        terms.append(total)
    return times, terms


def xi_series(
    u0: SpectralField, t: float, j_max: int, n_nodes: int = 201
) -> list[SpectralField]:
    """Xi_0(t), ..., Xi_j_max(t)."""
    _, terms = xi_series_rows(u0, t, j_max, n_nodes)
    return [SpectralField(rows[-1], u0.M_grid) for rows in terms]


def series_trajectories(
    u0: SpectralField, t: float, j_max: int, n_nodes: int = 201
) -> list[Trajectory]:
    times, terms = xi_series_rows(u0, t, j_max, n_nodes)
    cfg = SolverConfig(
        dt=times[1] - times[0] if t > 0 else 1.0,
        T_final=t,
        M_grid=u0.M_grid,
        scheme="picard",
        picard_nodes=n_nodes,
    )
    return [
        Trajectory(times, [SpectralField(row, u0.M_grid) for row in rows], cfg)
        for rows in terms
    ]


def tree_sum_series(
    u0: SpectralField, t: float, j_max: int, n_nodes: int = 201
) -> list[SpectralField]:
    """Xi_j(t) as the explicit sum over trees with j internal nodes."""
    _warn_regime(u0, t)
    times = _node_times(t, n_nodes)
    M = u0.M_grid
    cache: dict[str, np.ndarray] = {}

    def evaluate(tree: TreeNode) -> np.ndarray:
        key = tree.canonical
        if key not in cache:
            if tree.is_terminal:
                cache[key] = linear_rows(u0, times)
            else:
                left, right = tree.children
                cache[key] = _bilinear_rows(evaluate(left), evaluate(right), times, M)
        return cache[key]

    terms = []
    for j in range(j_max + 1):
        total = sum(evaluate(tree)[-1] for tree in enumerate_trees(j))
        terms.append(SpectralField(total, M))
    logger.debug("tree sum used %d distinct trees", len(cache))
    return terms


def xi_growth_constants(
    u0: SpectralField,
    t: float,
    j_max: int,
    n_nodes: int = 201,
    variant: str = "fl1",
) -> list[float]:
    """Measured C_j, j = 1..j_max, in ||Xi_j|| <= (C t ||u0||)^j ||u0||.

    variant "fl1" measures FL^1 against FL^1; "l2-flinf" measures FL^inf
    against L^2.
    """
    if variant == "fl1":
        size = fourier_lebesgue_norm(u0, 0.0, 1)

        def out_norm(f):
            return fourier_lebesgue_norm(f, 0.0, 1)

    elif variant == "l2-flinf":
        size = fourier_lebesgue_norm(u0, 0.0, 2)

        def out_norm(f):
            return fourier_lebesgue_norm(f, 0.0, np.inf)

    else:
        raise ParameterError(f"unknown growth variant {variant!r}")
    if size == 0 or t <= 0:
        raise ParameterError("growth constants need nonzero data and t > 0")
    terms = xi_series(u0, t, j_max, n_nodes)
    constants = []
    for j in range(1, j_max + 1):
        ratio = out_norm(terms[j]) / size
        constants.append(ratio ** (1.0 / j) / (t * size))
    return constants


def support_intervals(
    f: SpectralField, gap: int = 2, rel_tol: float = 1e-9
) -> list[tuple[int, int]]:
    """Maximal runs of the support whose consecutive frequencies are <= gap apart."""
    support = f.support(rel_tol)
    if support.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(support) > gap)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [support.size - 1]])
    return [(int(support[a]), int(support[b])) for a, b in zip(starts, ends)]
