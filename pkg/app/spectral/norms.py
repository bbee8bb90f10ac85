import logging
import math
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError, ResolutionError
from app.spectral.field import SpectralField, apply_multiplier, bessel_symbol, japanese
from app.spectral.transforms import to_grid

logger = logging.getLogger(__name__)


def sobolev_norm(f: SpectralField, s: float) -> float:
    weights = japanese(f.n) ** (2 * s)
    return math.sqrt(float(np.sum(weights * np.abs(f.coeffs) ** 2)))


def fourier_lebesgue_norm(f: SpectralField, s: float, p: float) -> float:
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    weighted = japanese(f.n) ** s * np.abs(f.coeffs)
    if math.isinf(p):
        return float(weighted.max(initial=0.0))
    if p == 2:
        return math.sqrt(float(np.sum(weighted**2)))
    peak = weighted.max(initial=0.0)
    if peak == 0.0:
        return 0.0
    return float(peak * np.sum((weighted / peak) ** p) ** (1.0 / p))


def wsp_norm(f: SpectralField, s: float, p: float, grid_points: int) -> float:
    """W^{s,p} norm by grid quadrature of |<d_x>^s f| with measure dx/2pi."""
    if grid_points < 2 * f.M_grid + 1:
        raise ResolutionError(
            f"grid_points={grid_points} below resolution floor {2 * f.M_grid + 1}"
        )
    if math.isinf(p) and grid_points < 8 * f.M_grid:
        logger.warning(
            "sup norm on %d points for band %d; grid max may undershoot",
            grid_points,
            f.M_grid,
        )
    values = np.abs(to_grid(apply_multiplier(f, bessel_symbol(s)), grid_points))
    if math.isinf(p):
        return float(values.max())
    return float(np.mean(values**p) ** (1.0 / p))


@dataclass(frozen=True)
class NormDescriptor:
    """Which norm to evaluate: H^s, FL^{s,p} or W^{s,p}."""

    space: str = "H"
    s: float = 0.0
    p: float = 2.0
    grid_factor: int = 8

    def __post_init__(self):
        if self.space not in ("H", "FL", "W"):
            raise ParameterError(f"unknown norm space {self.space!r}")

    def __call__(self, f: SpectralField) -> float:
        if self.space == "H":
            return sobolev_norm(f, self.s)
        if self.space == "FL":
            return fourier_lebesgue_norm(f, self.s, self.p)
        grid_points = max(self.grid_factor * f.M_grid, 2 * f.M_grid + 1)
        return wsp_norm(f, self.s, self.p, grid_points)

    def label(self) -> str:
        if self.space == "H":
            return f"H^{self.s}"
        return f"{self.space}^{{{self.s},{self.p}}}"
