"""Measured constant of the phi(D) product bound in FL^{s,p}:

    ||phi(D)(uv)||_{FL^{s,p}} <= C ||u||_{FL^{s,p}} ||v||_{FL^{s,p}}.

For p > 2 and s < 1/2 - 1/p the bound fails; indicators of [-A, A] make the
ratio grow like A^(1 - 2s - 2/p).
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.spectral.field import SpectralField
from app.spectral.products import bilinear_ratio, decaying_random_field
from app.stats.montecarlo import LinearFit, fit_loglog

logger = logging.getLogger(__name__)


@dataclass
class BilinearReport:
    s: float
    p: float
    adversarial: bool
    scales: list[int]
    ratios: list[float]
    fit: LinearFit | None = None

    @property
    def expected_slope(self) -> float:
        return 1.0 - 2.0 * self.s - 2.0 / self.p

    def rows(self) -> list[dict]:
        key = "A" if self.adversarial else "M_grid"
        return [{key: k, "ratio": r} for k, r in zip(self.scales, self.ratios)]


def indicator_field(A: int) -> SpectralField:
    """Coefficients 1 on [-A, A]."""
    return SpectralField(np.ones(2 * A + 1, dtype=complex), A)


def bilinear_flp_probe(
    s: float,
    p: float,
    trials: int = 50,
    adversarial: bool = False,
    scales: Sequence[int] = (32, 64, 128, 256, 512),
    seed: int = 0,
    decay: float = 1.0,
) -> BilinearReport:
    """Max ratio over random pairs per M_grid, or the indicator ratio per A."""
    ratios = []
    if adversarial:
        for A in scales:
            f = indicator_field(A)
            ratios.append(bilinear_ratio(f, f, s, p))
    else:
        rng = np.random.default_rng(seed)
        for M in scales:
            worst = 0.0
            for _ in range(trials):
                f = decaying_random_field(rng, M, decay)
                g = decaying_random_field(rng, M, decay)
                worst = max(worst, bilinear_ratio(f, g, s, p))
            ratios.append(worst)
    report = BilinearReport(s, p, adversarial, list(scales), ratios)
    if len(scales) >= 2:
        report.fit = fit_loglog(report.scales, report.ratios)
    logger.debug("bilinear probe s=%s p=%s: ratios %s", s, p, ratios)
    return report
