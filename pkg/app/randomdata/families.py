"""Counter-based samplers for the randomized initial data.

Frequency n of member `seed` reads block n of a Philox stream keyed by the
seed, so raising the truncation never changes the low modes already drawn.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from app.errors import ParameterError, UnknownFamilyError
from app.spectral.field import SpectralField, japanese

logger = logging.getLogger(__name__)

WORDS_PER_MODE = 4
_TWO_POW_53 = 2.0**-53


def uniform_blocks(seed: int, M: int) -> np.ndarray:
    """Uniforms on (0, 1), shape (M + 1, 4); row n depends only on (seed, n)."""
    raw = np.random.Philox(key=int(seed)).random_raw(WORDS_PER_MODE * (M + 1))
    raw = raw.reshape(M + 1, WORDS_PER_MODE)
    return ((raw >> np.uint64(11)).astype(float) + 0.5) * _TWO_POW_53


def _gaussian(u: np.ndarray) -> np.ndarray:
    x = ndtri(u[:, 0])
    y = ndtri(u[:, 1])
    g = (x + 1j * y) / math.sqrt(2.0)
    g[0] = x[0]
    return g


def _uniform_phase(u: np.ndarray) -> np.ndarray:
    g = np.exp(2j * math.pi * u[:, 0])
    g[0] = 0.0
    return g


@dataclass(frozen=True)
class Family:
    """A coefficient law: draw(u) maps uniform blocks to g_0..g_M.

    abs_moment(k) is E|g_n|^(2k) for n != 0 and zero_moment(k) is E g_0^k.
    """

    name: str
    draw: Callable[[np.ndarray], np.ndarray]
    abs_moment: Callable[[int], float]
    zero_moment: Callable[[int], float]
    verified: bool = True


def _gaussian_zero_moment(k: int) -> float:
    if k % 2:
        return 0.0
    return float(math.prod(range(k - 1, 0, -2))) if k else 1.0


FAMILIES: dict[str, Family] = {
    "gaussian": Family(
        "gaussian",
        _gaussian,
        lambda k: float(math.factorial(k)),
        _gaussian_zero_moment,
    ),
    "uniform-phase": Family(
        "uniform-phase",
        _uniform_phase,
        lambda k: 1.0,
        lambda k: 1.0 if k == 0 else 0.0,
    ),
}


def register_family(family: Family) -> None:
    """Add a custom-verified family; it must pass moment_table_check first."""
    if family.name in FAMILIES:
        raise ParameterError(f"family {family.name!r} already registered")
    FAMILIES[family.name] = family
    logger.info("Registered random family %s", family.name)


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamilyError(
            f"unknown random family {name!r}; known: {sorted(FAMILIES)}"
        ) from None


def draw_coefficients(family: str, seed: int, M: int) -> np.ndarray:
    """g_0..g_M for one member."""
    return get_family(family).draw(uniform_blocks(seed, M))


@dataclass(frozen=True)
class RandomDataSpec:
    family: str = "gaussian"
    alpha: float = 0.5
    M_grid: int = 64
    seed: int = 0

    def __post_init__(self):
        get_family(self.family)
        if self.M_grid < 1:
            raise ParameterError(f"M_grid must be >= 1, got {self.M_grid}")

    def with_seed(self, seed: int) -> "RandomDataSpec":
        return RandomDataSpec(self.family, self.alpha, self.M_grid, seed)

    def with_truncation(self, M_grid: int) -> "RandomDataSpec":
        return RandomDataSpec(self.family, self.alpha, M_grid, self.seed)


def sample_initial_data(spec: RandomDataSpec) -> SpectralField:
    g = draw_coefficients(spec.family, spec.seed, spec.M_grid)
    n = np.arange(spec.M_grid + 1)
    return SpectralField.from_nonnegative(g * japanese(n) ** (-spec.alpha))
