"""Monte Carlo estimators and the slope fits used across the diagnostics."""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class Estimate:
    mean: float | complex
    stderr: float
    n_samples: int = 0

    def within(self, target: float | complex, n_sigma: float = 3.0) -> bool:
        return abs(self.mean - target) <= n_sigma * self.stderr + 1e-15 * abs(target)

    def as_dict(self) -> dict:
        mean = self.mean
        if isinstance(mean, complex):
            mean = mean.real if mean.imag == 0 else str(mean)
        return {"mean": mean, "stderr": self.stderr, "n_samples": self.n_samples}


def standard_error(samples: np.ndarray) -> float:
    samples = np.asarray(samples)
    n = samples.shape[0]
    if n < 2:
        return math.inf
    centred = samples - samples.mean(axis=0)
    return float(np.sqrt(np.sum(np.abs(centred) ** 2) / (n - 1) / n))


def estimate_mean(samples) -> Estimate:
    samples = np.asarray(samples)
    mean = samples.mean()
    mean = complex(mean) if np.iscomplexobj(samples) else float(mean)
    return Estimate(mean, standard_error(samples), int(samples.shape[0]))


def estimate_root_moment(samples, q: float) -> Estimate:
    """(E X^q)^(1/q) from samples of X >= 0, stderr by the delta method."""
    powered = np.asarray(samples, dtype=float) ** q
    raw = estimate_mean(powered)
    if raw.mean <= 0:
        return Estimate(0.0, 0.0, raw.n_samples)
    value = raw.mean ** (1.0 / q)
    return Estimate(value, raw.stderr * value / (q * raw.mean), raw.n_samples)


def largest_rise(estimates: Sequence[Estimate]) -> float:
    """Largest step up between successive estimates, in combined stderrs.

    A sequence decreases within sampling error when this is at most n_sigma;
    -inf for fewer than two estimates.
    """
    worst = -math.inf
    for prev, nxt in zip(estimates, estimates[1:]):
        rise = float(np.real(nxt.mean - prev.mean))
        scale = math.hypot(prev.stderr, nxt.stderr)
        if scale > 0:
            worst = max(worst, rise / scale)
        elif rise > 0:
            return math.inf
    return worst


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float


def fit_line(x, y) -> LinearFit:
    result = stats.linregress(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return LinearFit(
        float(result.slope),
        float(result.intercept),
        float(result.rvalue**2),
        float(result.stderr),
    )


def fit_loglog(x, y) -> LinearFit:
    return fit_line(np.log(x), np.log(y))


def fit_increment_slope(x, y) -> LinearFit:
    """Growth exponent of y(x) ~ a x^kappa + b from successive increments.

    Fits log(y[i+1] - y[i]) against log(x[i]); the additive constant b
    cancels, so slowly converging sums read off their true exponent.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    increments = np.diff(y)
    if np.any(increments <= 0):
        raise ValueError("increments must be positive to fit a growth exponent")
    return fit_loglog(x[:-1], increments)
