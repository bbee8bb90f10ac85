"""Monte Carlo moment estimators for the random data and their exact values."""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from app.errors import ParameterError
from app.randomdata.families import (
    RandomDataSpec,
    draw_coefficients,
    get_family,
    sample_initial_data,
)
from app.spectral.field import japanese
from app.spectral.norms import NormDescriptor
from app.stats.ensemble import map_members, member_seeds
from app.stats.montecarlo import Estimate, estimate_mean, estimate_root_moment

logger = logging.getLogger(__name__)


def estimate_moment(
    spec: RandomDataSpec,
    norm: NormDescriptor,
    q: float,
    n_samples: int,
    threads: int = 1,
) -> Estimate:
    """E ||u0||^q over members seeded from spec.seed."""
    if n_samples < 10:
        raise ParameterError(f"n_samples must be >= 10, got {n_samples}")
    seeds = member_seeds(spec.seed, n_samples)
    values = map_members(
        lambda seed: norm(sample_initial_data(spec.with_seed(seed))) ** q,
        seeds,
        threads,
    )
    return estimate_mean(np.asarray(values))


def expected_sobolev_square(spec: RandomDataSpec, s: float) -> float:
    """E ||u0||^2_{H^s} = Var(g0) + sum_{n != 0} E|g_n|^2 <n>^(2s - 2 alpha)."""
    family = get_family(spec.family)
    n = np.arange(1, spec.M_grid + 1)
    weights = japanese(n) ** (2 * s - 2 * spec.alpha)
    tail = 2.0 * family.abs_moment(1) * float(np.sum(weights))
    return family.zero_moment(2) + tail


def chaos_moment_ratio(
    a: np.ndarray,
    q_list: Sequence[float],
    n_samples: int,
    seed: int = 0,
    family: str = "gaussian",
) -> dict[float, Estimate]:
    """||sum a_n g_n||_{L^q(Omega)} / (q^(1/2) ||a||_2) for each q."""
    a = np.asarray(a, dtype=float)
    M = a.size
    seeds = member_seeds(seed, n_samples)
    sums = np.array(
        [np.abs(np.dot(a, draw_coefficients(family, s, M)[1:])) for s in seeds]
    )
    scale = float(np.linalg.norm(a))
    ratios = {}
    for q in q_list:
        root = estimate_root_moment(sums, q)
        norm = math.sqrt(q) * scale
        ratios[q] = Estimate(root.mean / norm, root.stderr / norm, root.n_samples)
    return ratios


def gaussian_chaos_ratio(q: float) -> float:
    """Exact ratio for complex gaussian coefficients: Gamma(1+q/2)^(1/q) / q^(1/2)."""
    return math.exp(math.lgamma(1.0 + q / 2.0) / q) / math.sqrt(q)


def analytic_moment(family: str, indices: Sequence[int]) -> float:
    """E[prod_j g_{n_j}] with g_{-n} = conj(g_n), from independence and
    E[g^k conj(g)^l] = delta_{kl} E|g|^(2k)."""
    law = get_family(family)
    plus: Counter = Counter()
    minus: Counter = Counter()
    zero = 0
    for n in indices:
        if n > 0:
            plus[n] += 1
        elif n < 0:
            minus[-n] += 1
        else:
            zero += 1
    value = law.zero_moment(zero) if zero else 1.0
    for m in set(plus) | set(minus):
        if plus[m] != minus[m]:
            return 0.0
        value *= law.abs_moment(plus[m])
    return float(value)


@dataclass
class MomentCase:
    indices: tuple[int, ...]
    classification: str
    analytic: float
    estimate: Estimate
    passed: bool


@dataclass
class MomentTableReport:
    family: str
    n_samples: int
    cases: list[MomentCase] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)


def moment_table_check(
    family: str,
    indices: Sequence[Sequence[int]],
    n_samples: int,
    seed: int = 0,
    n_sigma: float = 3.0,
) -> MomentTableReport:
    """Classify each tuple as a vanishing or pairing case and compare MC to it."""
    for tup in indices:
        if len(tup) > 8:
            raise ParameterError(f"tuples are limited to length 8, got {tup}")
    M = max((abs(n) for tup in indices for n in tup), default=0)
    seeds = member_seeds(seed, n_samples)
    draws = np.array([draw_coefficients(family, s, M) for s in seeds])
    report = MomentTableReport(family, n_samples)
    for tup in indices:
        product = np.ones(n_samples, dtype=complex)
        for n in tup:
            product *= draws[:, n] if n >= 0 else np.conj(draws[:, -n])
        exact = analytic_moment(family, tup)
        est = estimate_mean(product)
        case = MomentCase(
            tuple(tup),
            "pairing" if exact != 0.0 else "vanishing",
            exact,
            est,
            est.within(exact, n_sigma),
        )
        if not case.passed:
            logger.warning(
                "moment %s for %s: MC %s vs exact %s (stderr %.3g)",
                tup,
                family,
                est.mean,
                exact,
                est.stderr,
            )
        report.cases.append(case)
    return report


def rotation_invariance_check(
    family: str, theta: float, n_samples: int, mode: int = 1, seed: int = 0
) -> float:
    """Two-sample KS p-value of Re(e^{i theta} g) against Re(g) on disjoint halves."""
    seeds = member_seeds(seed, n_samples)
    draws = np.array([draw_coefficients(family, s, mode)[mode] for s in seeds])
    half = n_samples // 2
    rotated = np.real(np.exp(1j * theta) * draws[:half])
    plain = np.real(draws[half:])
    return float(stats.ks_2samp(rotated, plain).pvalue)


def seed_correlation(
    family: str, n_pairs: int, mode: int = 1, seed: int = 0
) -> Estimate:
    """Correlation of Re g_mode between consecutive member seeds."""
    seeds = member_seeds(seed, n_pairs + 1)
    values = np.array([draw_coefficients(family, s, mode)[mode].real for s in seeds])
    x, y = values[:-1], values[1:]
    x = (x - x.mean()) / x.std()
    y = (y - y.mean()) / y.std()
    return estimate_mean(x * y)
