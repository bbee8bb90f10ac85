"""Monte Carlo and pairing-sum diagnostics for the renormalized nonlinearity.

Every expectation here has two paths: an ensemble average over seeded
members and a closed-form pairing sum obtained from independence of the
coefficients and E[g^k conj(g)^l] = delta_{kl} E|g|^(2k).
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.signal import fftconvolve

from app.errors import ParameterError, SubcriticalRegimeError
from app.nonlinearity.renormalized import renormalized_nonlinearity
from app.randomdata.families import (
    RandomDataSpec,
    draw_coefficients,
    get_family,
    sample_initial_data,
)
from app.randomdata.mollifiers import get_kernel, kernel_weights, mollify
from app.spectral.field import (
    SpectralField,
    apply_multiplier,
    frequencies,
    japanese,
    phi,
    propagator_symbol,
)
from app.spectral.norms import sobolev_norm
from app.stats.ensemble import map_members, member_seeds
from app.stats.montecarlo import (
    Estimate,
    LinearFit,
    estimate_mean,
    fit_increment_slope,
    fit_loglog,
)

logger = logging.getLogger(__name__)


@dataclass
class NonlinearityReport:
    quantity: str
    parameters: list[float] = field(default_factory=list)
    estimates: list[Estimate] = field(default_factory=list)
    analytic: list[float] = field(default_factory=list)
    slope: LinearFit | None = None
    # C_k / k^(1 - 2 alpha), or C_k / log k at alpha = 1/2
    normalized: list[float] = field(default_factory=list)

    def rows(self) -> list[dict]:
        rows = []
        for i, parameter in enumerate(self.parameters):
            row = {"parameter": parameter}
            if i < len(self.estimates):
                row["estimate"] = float(np.real(self.estimates[i].mean))
                row["stderr"] = self.estimates[i].stderr
            if i < len(self.analytic):
                row["analytic"] = self.analytic[i]
            if i < len(self.normalized):
                row["normalized"] = self.normalized[i]
            rows.append(row)
        return rows


def linear_field(
    u0: SpectralField, kernel=None, k: float | None = None, t: float = 0.0
) -> SpectralField:
    """z_k(t) = S(t) rho_k u0; no mollification when kernel is None."""
    z = u0 if kernel is None else mollify(u0, kernel, k)
    if t == 0.0:
        return z
    return apply_multiplier(z, propagator_symbol(t))


def _second_moments(family: str, M: int) -> np.ndarray:
    """E|g_n|^2 for n = -M..M."""
    law = get_family(family)
    n = frequencies(M)
    return np.where(n == 0, law.zero_moment(2), law.abs_moment(1))


def _check_sample_count(n_samples: int | None) -> int:
    if n_samples is None or n_samples < 2:
        raise ParameterError(f"monte-carlo mode needs n_samples >= 2, got {n_samples}")
    return n_samples


# -- zero-mode constant ------------------------------------------------------


def zero_mode_constant(
    alpha: float,
    k: float,
    kernel="dirichlet",
    mode: str = "analytic",
    n_samples: int | None = None,
    family: str = "gaussian",
    M_grid: int | None = None,
    seed: int = 0,
    t: float = 0.0,
    threads: int = 1,
) -> Estimate:
    """C_k = E[P_0(z_k(t)^2)] = sum_m |rho(m/k)|^2 <m>^(-2 alpha) E|g_m|^2."""
    M = M_grid or get_kernel(kernel).support_radius(k)
    if mode == "analytic":
        weights = kernel_weights(kernel, k, M) ** 2
        weights = weights * japanese(frequencies(M)) ** (-2 * alpha)
        return Estimate(float(np.sum(weights * _second_moments(family, M))), 0.0, 0)
    if mode != "monte-carlo":
        raise ParameterError(f"unknown mode {mode!r}")
    n_samples = _check_sample_count(n_samples)
    spec = RandomDataSpec(family, alpha, M, seed)

    def zero_mode(member: int) -> float:
        z = linear_field(sample_initial_data(spec.with_seed(member)), kernel, k, t)
        return float(np.sum(np.abs(z.coeffs) ** 2))

    values = map_members(zero_mode, member_seeds(seed, n_samples), threads)
    return estimate_mean(np.asarray(values))


def zero_mode_time_invariance(
    alpha: float,
    k: float,
    kernel="dirichlet",
    times: Sequence[float] = (0.0, 0.5, 1.0),
    n_samples: int = 1000,
    family: str = "gaussian",
    seed: int = 0,
    threads: int = 1,
) -> list[Estimate]:
    return [
        zero_mode_constant(
            alpha,
            k,
            kernel,
            "monte-carlo",
            n_samples,
            family,
            seed=seed,
            t=t,
            threads=threads,
        )
        for t in times
    ]


def ck_divergence(
    alpha: float,
    k_list: Sequence[float],
    kernel="dirichlet",
    family: str = "gaussian",
) -> NonlinearityReport:
    """Analytic C_k over k_list with the fitted growth exponent of its increments."""
    report = NonlinearityReport("C_k", [float(k) for k in k_list])
    for k in k_list:
        report.analytic.append(zero_mode_constant(alpha, k, kernel, family=family).mean)
        if alpha == 0.5:
            report.normalized.append(report.analytic[-1] / math.log(k))
        else:
            report.normalized.append(report.analytic[-1] / k ** (1 - 2 * alpha))
    report.slope = fit_increment_slope(report.parameters, report.analytic)
    logger.info("C_k increments grow like k^%.3f (alpha=%s)", report.slope.slope, alpha)
    return report


# -- Cauchy property of N(z_k) -----------------------------------------------


def _difference_second_moment(
    a_first: np.ndarray, a_second: np.ndarray, s2: float, family: str
) -> float:
    """E||N(sum a_first g) - N(sum a_second g)||^2_{H^s2} by the pairing sum.

    With b(n1, n2) = a'(n1)a'(n2) - a(n1)a(n2), only the pairings
    (m1, m2) = (n1, n2), (n2, n1) survive for n != 0, plus a fourth
    moment correction on the diagonal n1 = n2 = n/2.
    """
    M = (a_first.size - 1) // 2
    w = _second_moments(family, M)
    p_first = a_first * a_first * w
    p_cross = a_first * a_second * w
    p_second = a_second * a_second * w
    conv = (
        fftconvolve(p_first, p_first)
        - 2.0 * fftconvolve(p_cross, p_cross)
        + fftconvolve(p_second, p_second)
    )
    law = get_family(family)
    diagonal = np.zeros(4 * M + 1)
    diagonal[::2] = (law.abs_moment(2) - 2.0 * w**2) * (a_first**2 - a_second**2) ** 2
    n = frequencies(2 * M)
    weights = japanese(n) ** (2 * s2) * phi(n) ** 2
    return float(np.sum(weights * (2.0 * conv + diagonal)))


def _profile(alpha: float, kernel, k: float, M: int) -> np.ndarray:
    return kernel_weights(kernel, k, M) * japanese(frequencies(M)) ** (-alpha)


def nz_second_moment(
    alpha: float,
    s2: float,
    kernel,
    k: float,
    k_prime: float,
    M: int | None = None,
    family: str = "gaussian",
) -> float:
    """Closed form of E||N(z_k') - N(z_k)||^2_{H^s2} at t = 0."""
    M = M or get_kernel(kernel).support_radius(max(k, k_prime))
    return _difference_second_moment(
        _profile(alpha, kernel, k_prime, M),
        _profile(alpha, kernel, k, M),
        s2,
        family,
    )


def _check_nz_regime(alpha: float, s2: float) -> None:
    if alpha <= 0.25:
        raise SubcriticalRegimeError(
            f"alpha={alpha} <= 1/4: N(z_k) is not Cauchy and has no limit"
        )
    if alpha > 0.5:
        raise ParameterError(f"alpha must be <= 1/2, got {alpha}")
    if s2 >= 2 * alpha:
        raise ParameterError(f"s2={s2} must be below 2*alpha={2 * alpha}")


def _mc_difference(
    alpha: float,
    s2: float,
    pair: tuple,
    M: int,
    n_samples: int,
    family: str,
    seed: int,
    threads: int,
) -> Estimate:
    (kernel_a, k_a), (kernel_b, k_b) = pair
    spec = RandomDataSpec(family, alpha, M, seed)

    def squared_norm(member: int) -> float:
        u0 = sample_initial_data(spec.with_seed(member))
        first = renormalized_nonlinearity(mollify(u0, kernel_a, k_a), truncate=False)
        second = renormalized_nonlinearity(mollify(u0, kernel_b, k_b), truncate=False)
        return sobolev_norm(first - second, s2) ** 2

    values = map_members(squared_norm, member_seeds(seed, n_samples), threads)
    return estimate_mean(np.asarray(values))


def nz_convergence(
    alpha: float,
    s2: float,
    kernel,
    k_list: Sequence[float],
    n_samples: int,
    family: str = "gaussian",
    seed: int = 0,
    k_factor: float = 2.0,
    threads: int = 1,
) -> NonlinearityReport:
    """E||N(z_{k_factor*k}) - N(z_k)||^2_{H^s2} per k, MC next to the pairing sum."""
    _check_nz_regime(alpha, s2)
    report = NonlinearityReport("nz_cauchy", [float(k) for k in k_list])
    for k in k_list:
        k_prime = k_factor * k
        M = get_kernel(kernel).support_radius(k_prime)
        report.analytic.append(
            nz_second_moment(alpha, s2, kernel, k, k_prime, M, family)
        )
        if n_samples:
            pair = ((kernel, k_prime), (kernel, k))
            report.estimates.append(
                _mc_difference(alpha, s2, pair, M, n_samples, family, seed, threads)
            )
    values = (
        [float(e.mean) for e in report.estimates]
        if report.estimates
        else report.analytic
    )
    if len(values) >= 2 and min(values) > 0:
        report.slope = fit_loglog(report.parameters, values)
    return report


def kernel_independence(
    alpha: float,
    s2: float,
    k_list: Sequence[float],
    kernels: tuple = ("fejer", "gaussian-symbol"),
    n_samples: int = 0,
    family: str = "gaussian",
    seed: int = 0,
    threads: int = 1,
) -> NonlinearityReport:
    """E||N_first(z_k) - N_second(z_k)||^2_{H^s2}; tends to 0 as k grows."""
    _check_nz_regime(alpha, s2)
    first, second = (get_kernel(name) for name in kernels)
    report = NonlinearityReport(
        f"{first.name}-vs-{second.name}", [float(k) for k in k_list]
    )
    for k in k_list:
        M = max(first.support_radius(k), second.support_radius(k))
        report.analytic.append(
            _difference_second_moment(
                _profile(alpha, first, k, M), _profile(alpha, second, k, M), s2, family
            )
        )
        if n_samples:
            pair = ((first, k), (second, k))
            report.estimates.append(
                _mc_difference(alpha, s2, pair, M, n_samples, family, seed, threads)
            )
    if len(report.analytic) >= 2 and min(report.analytic) > 0:
        report.slope = fit_loglog(report.parameters, report.analytic)
    return report


# -- divergence for alpha <= 1/4 ---------------------------------------------


def _sharpness_pairs(N: int, M: int, test_mode: int) -> tuple[np.ndarray, np.ndarray]:
    """Pairs n1 + n2 = test_mode with M < max(|n1|, |n2|) <= N."""
    n1 = np.arange(-N, N + 1)
    n2 = test_mode - n1
    keep = (np.abs(n2) <= N) & (np.maximum(np.abs(n1), np.abs(n2)) > M)
    return n1[keep], n2[keep]


def sharpness_variance(
    alpha: float,
    test_mode: int,
    N: int,
    M: int | None = None,
    family: str = "gaussian",
) -> float:
    """Var <N(f_N) - N(f_M), psi> with psi_hat = 1 at +-test_mode."""
    M = N // 2 if M is None else M
    n1, n2 = _sharpness_pairs(N, M, test_mode)
    if n1.size == 0:
        return 0.0
    law = get_family(family)

    def second(n):
        return np.where(n == 0, law.zero_moment(2), law.abs_moment(1))

    c1 = japanese(n1) ** (-2 * alpha)
    c2 = japanese(n2) ** (-2 * alpha)
    total = 2.0 * float(np.sum(c1 * c2 * second(n1) * second(n2)))
    diagonal = n1 == n2
    if np.any(diagonal):
        half = n1[diagonal]
        w = float(second(half)[0])
        total += (law.abs_moment(2) - 2.0 * w * w) * float(
            japanese(half[0]) ** (-4 * alpha)
        )
    return 2.0 * float(phi(test_mode)) ** 2 * total


def sharpness_pairing(u0: SpectralField, N: int, M: int, test_mode: int) -> complex:
    """<N(f_N) - N(f_M), psi> through the nonlinearity itself (slow path)."""
    f_N = u0.resize(N)
    f_M = u0.resize(M)
    difference = renormalized_nonlinearity(
        f_N, truncate=False
    ) - renormalized_nonlinearity(f_M, truncate=False)
    return difference[test_mode] + difference[-test_mode]


def _sharpness_sample(
    g: np.ndarray, alpha: float, test_mode: int, N: int, M: int
) -> float:
    n1, n2 = _sharpness_pairs(N, M, test_mode)
    full = np.concatenate([np.conj(g[:0:-1]), g])
    coeffs = japanese(frequencies(N)) ** (-alpha) * full
    S = np.sum(coeffs[n1 + N] * coeffs[n2 + N])
    # X = phi(m) S + phi(-m) conj(S) = 2i phi(m) Im S
    return 4.0 * float(phi(test_mode)) ** 2 * float(S.imag) ** 2


def sharpness_divergence(
    alpha: float,
    test_mode: int,
    N_list: Sequence[int],
    n_samples: int,
    family: str = "gaussian",
    seed: int = 0,
    M_ratio: float = 0.5,
    threads: int = 1,
) -> NonlinearityReport:
    if alpha > 0.25:
        raise ParameterError(f"divergence diagnostic needs alpha <= 1/4, got {alpha}")
    if test_mode == 0:
        raise ParameterError("test_mode must be non-zero")
    report = NonlinearityReport("sharpness_variance", [float(N) for N in N_list])
    N_max = max(N_list)

    def member_values(member: int) -> list[float]:
        g = draw_coefficients(family, member, N_max)
        return [
            _sharpness_sample(g[: N + 1], alpha, test_mode, N, int(M_ratio * N))
            for N in N_list
        ]

    values = np.asarray(
        map_members(member_values, member_seeds(seed, n_samples), threads)
    )
    for i, N in enumerate(N_list):
        M = int(M_ratio * N)
        report.estimates.append(estimate_mean(values[:, i]))
        report.analytic.append(sharpness_variance(alpha, test_mode, N, M, family))
    means = [float(e.mean) for e in report.estimates]
    if min(means) > 0:
        report.slope = fit_loglog(report.parameters, means)
        logger.info(
            "sharpness variance grows like N^%.3f (alpha=%s)", report.slope.slope, alpha
        )
    return report


# -- fourth moment bound -----------------------------------------------------


def quartic_norm_integral(
    u0: SpectralField, s: float, T: float, n_times: int = 9
) -> float:
    """int_0^T ||N(S(t)u0)||^4_{H^s} dt by Simpson on n_times nodes."""
    if T == 0.0:
        return 0.0
    times = np.linspace(0.0, T, n_times)
    values = []
    for t in times:
        nz = renormalized_nonlinearity(linear_field(u0, t=t), truncate=False)
        values.append(sobolev_norm(nz, s) ** 4)
    return float(simpson(values, x=times))


def quartic_bound_check(
    alpha: float,
    s: float,
    T: float,
    n_samples: int,
    family: str = "gaussian",
    M_grid: int = 64,
    n_times: int = 9,
    seed: int = 0,
    threads: int = 1,
) -> Estimate:
    """E ||N(z)||^4_{L^4_T H^s}; stays bounded as M_grid doubles when s < 2 alpha."""
    if not 0.25 < alpha <= 0.5:
        raise ParameterError(f"alpha must lie in (1/4, 1/2], got {alpha}")
    if s >= 2 * alpha:
        raise ParameterError(f"s={s} must be below 2*alpha={2 * alpha}")
    spec = RandomDataSpec(family, alpha, M_grid, seed)
    values = map_members(
        lambda member: quartic_norm_integral(
            sample_initial_data(spec.with_seed(member)), s, T, n_times
        ),
        member_seeds(seed, n_samples),
        threads,
    )
    return estimate_mean(np.asarray(values))


def second_order_term(u0: SpectralField, t: float) -> SpectralField:
    """-(i/2) int_0^t S(t - t') N(z(t')) dt' with z = S(.)u0, no time quadrature."""
    from app.inflation.phase import xi1_exact

    return xi1_exact(u0, t, band=2 * u0.M_grid)
