"""Exceedance tails of the stochastic objects z and N(z).

z is a Gaussian object, so -log P(sup_t ||z||_{W^{-0.1,inf}} > lam) grows
like lam^2; N(z) is quadratic in the data and its tail grows like lam.
All observables live at a fixed truncation M_grid: the tails are
statements about the truncated objects.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from statsmodels.stats.proportion import proportion_confint

from app.errors import InsufficientSamplesError, ParameterError
from app.nonlinearity.diagnostics import linear_field
from app.nonlinearity.renormalized import renormalized_nonlinearity
from app.randomdata.families import RandomDataSpec, sample_initial_data
from app.spectral.norms import NormDescriptor
from app.stats.ensemble import map_members, member_seeds
from app.stats.montecarlo import LinearFit, fit_line, fit_loglog
from app.tails.holder import (
    DEFAULT_Q,
    PathSample,
    grr_exponent,
    grr_path_bound,
    holder_seminorm,
)

logger = logging.getLogger(__name__)

OBSERVABLES = ("z", "nz")
MIN_EXCEEDANCES = 10
GRID_SIZE = 12
KAPPA_FRACTION = 0.8
CONFIDENCE = 0.95


@dataclass(frozen=True)
class ObservableSpec:
    kind: str = "z"
    alpha: float = 0.5
    M_grid: int = 32
    family: str = "gaussian"
    regularity: float | None = None
    n_times: int = 9

    def __post_init__(self):
        if self.kind not in OBSERVABLES:
            raise ParameterError(f"unknown observable {self.kind!r}")
        if self.n_times < 3:
            raise ParameterError(f"n_times must be at least 3, got {self.n_times}")

    @property
    def power(self) -> int:
        """Nominal tail power: -log P ~ lam^power."""
        return 2 if self.kind == "z" else 1

    def norm(self) -> NormDescriptor:
        if self.kind == "z":
            s = -0.1 if self.regularity is None else self.regularity
            return NormDescriptor("W", s, math.inf)
        s = 0.5 if self.regularity is None else self.regularity
        return NormDescriptor("H", s)


def sample_path(spec: ObservableSpec, T: float, seed: int) -> PathSample:
    """z(t) or N(z(t)) at n_times uniform times of [0, T] for one member."""
    u0 = sample_initial_data(RandomDataSpec(spec.family, spec.alpha, spec.M_grid, seed))
    times = np.linspace(0.0, T, spec.n_times)
    states = [linear_field(u0, t=float(t)) for t in times]
    if spec.kind == "nz":
        states = [renormalized_nonlinearity(z, truncate=False) for z in states]
    return PathSample(times, states, observable=spec.kind, seed=seed)


def observable_value(spec: ObservableSpec, path: PathSample) -> float:
    norm = spec.norm()
    return max(norm(state) for state in path.states)


def sample_observable(
    spec: ObservableSpec, T: float, n_samples: int, seed: int = 0, threads: int = 1
) -> np.ndarray:
    def value(member: int) -> float:
        return observable_value(spec, sample_path(spec, T, member))

    return np.asarray(map_members(value, member_seeds(seed, n_samples), threads))


def default_lambda_grid(values: np.ndarray, size: int = GRID_SIZE) -> np.ndarray:
    """Quantiles at levels 1 - e^(-u), u from log 2 to log(n / 10).

    The top level leaves MIN_EXCEEDANCES samples above the last lam.
    """
    n = values.size
    if n < 2 * MIN_EXCEEDANCES:
        raise InsufficientSamplesError(
            f"{n} samples cannot give {MIN_EXCEEDANCES} exceedances past the median"
        )
    u = np.linspace(math.log(2.0), math.log(n / MIN_EXCEEDANCES), size)
    return np.quantile(values, 1.0 - np.exp(-u))


def _crossover(lams: np.ndarray, y: np.ndarray) -> float | None:
    """Split point of a lam^2 fit below and a lam fit above, by least squares."""
    if lams.size < 6:
        return None
    best, split = math.inf, None
    for k in range(3, lams.size - 2):
        lo = np.polyfit(lams[:k] ** 2, y[:k], 1, full=True)[1]
        hi = np.polyfit(lams[k:], y[k:], 1, full=True)[1]
        sse = float(np.sum(lo)) + float(np.sum(hi))
        if sse < best:
            best, split = sse, float(lams[k])
    return split


@dataclass
class TailReport:
    observable: str
    T: float
    n_samples: int
    power: int
    lambdas: np.ndarray
    probabilities: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    exceedances: np.ndarray
    fit: LinearFit
    alt_fit: LinearFit
    kappa_fit: LinearFit
    crossover: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def kappa(self) -> float:
        return self.kappa_fit.slope

    @property
    def passed(self) -> bool:
        return self.fit.slope > 0 and self.kappa >= KAPPA_FRACTION * self.power

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "lambda": self.lambdas,
                "p_hat": self.probabilities,
                "ci_low": self.ci_low,
                "ci_high": self.ci_high,
                "exceedances": self.exceedances,
            }
        )

    def summary(self) -> dict:
        return {
            "observable": self.observable,
            "T": self.T,
            "n_samples": self.n_samples,
            "power": self.power,
            "slope": self.fit.slope,
            "r_squared": self.fit.r_squared,
            "alt_r_squared": self.alt_fit.r_squared,
            "kappa": self.kappa,
            "crossover": self.crossover,
            "passed": self.passed,
        }


def tail_check(
    spec: ObservableSpec,
    T: float,
    lambda_grid: Sequence[float] | None = None,
    n_samples: int = 10_000,
    seed: int = 0,
    threads: int = 1,
    values: np.ndarray | None = None,
) -> TailReport:
    """Empirical P(observable > lam) with Wilson intervals and tail fits.

    -log P is fitted against lam^power; the super-polynomial exponent is the
    slope of log(-log P) against log lam. Precomputed samples may be passed
    as `values`.
    """
    if values is None:
        values = sample_observable(spec, T, n_samples, seed, threads)
    values = np.asarray(values, dtype=float)
    n = values.size
    lams = (
        default_lambda_grid(values)
        if lambda_grid is None
        else np.sort(np.asarray(lambda_grid, dtype=float))
    )
    counts = np.array([int(np.sum(values > lam)) for lam in lams])
    if counts[-1] < MIN_EXCEEDANCES:
        raise InsufficientSamplesError(
            f"only {counts[-1]} of {n} samples exceed lam={lams[-1]:.4g}; "
            f"need {MIN_EXCEEDANCES}"
        )
    low, high = proportion_confint(counts, n, alpha=1 - CONFIDENCE, method="wilson")
    probs = counts / n
    minus_log = -np.log(probs)

    power = spec.power
    fit = fit_line(lams**power, minus_log)
    alt_fit = fit_line(lams ** (3 - power), minus_log)
    kappa_fit = fit_loglog(lams, minus_log)
    report = TailReport(
        observable=spec.kind,
        T=T,
        n_samples=n,
        power=power,
        lambdas=lams,
        probabilities=probs,
        ci_low=np.asarray(low),
        ci_high=np.asarray(high),
        exceedances=counts,
        fit=fit,
        alt_fit=alt_fit,
        kappa_fit=kappa_fit,
        crossover=_crossover(lams, minus_log),
    )
    if not report.passed:
        report.notes.append(
            f"kappa {report.kappa:.3g} below {KAPPA_FRACTION} x power {power}"
        )
    logger.info(
        "tail %s: slope %.3g (R^2 %.3f), kappa %.3g",
        spec.kind,
        fit.slope,
        fit.r_squared,
        report.kappa,
    )
    return report


@dataclass
class HolderReport:
    gamma: float
    beta: float
    q: float
    seminorms: list[float]
    bounds: list[float]

    @property
    def holds(self) -> bool:
        return all(h <= b for h, b in zip(self.seminorms, self.bounds))

    def rows(self) -> list[dict]:
        return [
            {"path": i, "seminorm": h, "grr_bound": b}
            for i, (h, b) in enumerate(zip(self.seminorms, self.bounds))
        ]


def holder_domination_check(
    spec: ObservableSpec,
    T: float,
    n_paths: int,
    seed: int = 0,
    beta: float | None = None,
    q: float = DEFAULT_Q,
    threads: int = 1,
) -> HolderReport:
    """Grid Hölder seminorm against its GRR bound on every sampled path."""
    beta = 0.25 + 1.0 / q if beta is None else beta
    gamma = grr_exponent(beta, q)
    norm = spec.norm()

    def pair(member: int) -> tuple[float, float]:
        path = sample_path(spec, T, member)
        return (
            holder_seminorm(path, gamma, norm),
            grr_path_bound(path, beta, q, norm),
        )

    results = map_members(pair, member_seeds(seed, n_paths), threads)
    report = HolderReport(
        gamma, beta, q, [r[0] for r in results], [r[1] for r in results]
    )
    if not report.holds:
        logger.warning("GRR bound fell below the grid seminorm on a sampled path")
    return report
