"""Measured constants of the commutator and moment estimates.

The probes report sup ratios over random ensembles with a few adversarial
fields concentrated near the cutoff added; they bound operator norms from
below.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from app.errors import ParameterError
from app.imethod.ledger import commutator_rate
from app.imethod.multiplier import IParams, apply_i, i_multiplier
from app.randomdata.families import RandomDataSpec, get_family, sample_initial_data
from app.spectral.field import SpectralField, japanese
from app.spectral.norms import sobolev_norm, wsp_norm
from app.spectral.products import product
from app.spectral.sums import phi_beta
from app.stats.ensemble import map_members, member_seeds
from app.stats.montecarlo import (
    Estimate,
    LinearFit,
    estimate_mean,
    estimate_root_moment,
    fit_loglog,
)

logger = logging.getLogger(__name__)

# z lives in W^{r,p} for r < alpha - 1/2; probes sit this far below the edge
Z_MARGIN = 0.01


def z_regularity_for(alpha: float) -> float:
    return alpha - 0.5 - Z_MARGIN


def commutator_v2_probe(w: SpectralField, p: IParams) -> float:
    """|int dx(Iw) [I(w^2) - (Iw)^2]| / ||Iw||_{H^1}^3."""
    denom = sobolev_norm(apply_i(w, p), 1.0) ** 3
    if denom == 0.0:
        raise ParameterError("commutator probe needs a nonzero field")
    return abs(2.0 * commutator_rate(w, p)) / denom


def commutator_vz_probe(
    w: SpectralField,
    z: SpectralField,
    p: IParams,
    p_int: float,
    alpha: float = 0.5,
    z_regularity: float | None = None,
) -> float:
    """||I(wz) - (Iw)(Iz)||_{L^2} over ||Iw||_{H^1} ||z||_{W^{r,p_int}}.

    r is z_regularity, by default just below alpha - 1/2 for z drawn at
    decay alpha; the W norm is sampled on 8 M grid points.
    """
    if z_regularity is None:
        z_regularity = z_regularity_for(alpha)
    defect = apply_i(product(w, z), p) - product(apply_i(w, p), apply_i(z, p))
    M = max(w.M_grid, z.M_grid)
    denom = sobolev_norm(apply_i(w, p), 1.0) * wsp_norm(
        z, z_regularity, p_int, 8 * M
    )
    if denom == 0.0:
        return 0.0
    return sobolev_norm(defect, 0.0) / denom


def adversarial_fields(N: int, M: int) -> list[SpectralField]:
    """Real few-mode fields with energy at and just above the cutoff."""
    pairs = [(N, N + 1), (1, N + 1), (N // 2, N), (N + 1, 2 * N + 1)]
    fields = []
    for a, b in pairs:
        if max(a, b) > M:
            continue
        positive = np.zeros(M + 1, dtype=complex)
        positive[a] += 1.0
        positive[b] += 1.0
        fields.append(SpectralField.from_nonnegative(positive))
    return fields


@dataclass
class ProbeReport:
    quantity: str
    N_list: list[int]
    max_ratio: list[float] = field(default_factory=list)
    reference: list[float] = field(default_factory=list)
    fit: LinearFit | None = None

    def rows(self) -> list[dict]:
        return [
            {"N": N, "max_ratio": r, "reference": ref}
            for N, r, ref in zip(self.N_list, self.max_ratio, self.reference)
        ]


def v2_probe_scan(
    s: float,
    N_list: Sequence[int],
    n_samples: int,
    family: str = "gaussian",
    seed: int = 0,
    threads: int = 1,
) -> ProbeReport:
    """Worst ratio of commutator_v2_probe per N over unit-H^s random fields.

    Fields live on M = 4N with coefficient decay <n>^-(s + 1/2).
    """
    report = ProbeReport("commutator_v2", list(N_list))
    for N in N_list:
        p = IParams(N, s)
        spec = RandomDataSpec(family, s + 0.5, 4 * N, seed)

        def ratio(member: int, p=p, spec=spec) -> float:
            return commutator_v2_probe(sample_initial_data(spec.with_seed(member)), p)

        ratios = map_members(ratio, member_seeds(seed, n_samples), threads)
        ratios += [commutator_v2_probe(w, p) for w in adversarial_fields(N, 4 * N)]
        report.max_ratio.append(max(ratios))
        report.reference.append(N**-1.5)
        logger.debug("v2 probe N=%d: max ratio %.3e", N, report.max_ratio[-1])
    report.fit = fit_loglog(report.N_list, report.max_ratio)
    return report


def vz_probe_scan(
    s: float,
    alpha: float,
    N_list: Sequence[int],
    n_samples: int,
    p_int: float = 4.0,
    z_regularity: float | None = None,
    family: str = "gaussian",
    seed: int = 0,
    threads: int = 1,
) -> ProbeReport:
    """Worst ratio of commutator_vz_probe per N, z drawn at decay alpha."""
    if z_regularity is None:
        z_regularity = z_regularity_for(alpha)
    report = ProbeReport("commutator_vz", list(N_list))
    for N in N_list:
        p = IParams(N, s)
        w_spec = RandomDataSpec(family, s + 0.5, 4 * N, seed)
        z_spec = RandomDataSpec(family, alpha, 4 * N, seed)

        def ratio(member: int, p=p, w_spec=w_spec, z_spec=z_spec) -> float:
            w = sample_initial_data(w_spec.with_seed(member))
            # an independent stream for z
            z = sample_initial_data(z_spec.with_seed(member ^ 0x5A5A5A5A))
            return commutator_vz_probe(w, z, p, p_int, z_regularity=z_regularity)

        ratios = map_members(ratio, member_seeds(seed, n_samples), threads)
        report.max_ratio.append(max(ratios))
        report.reference.append(N ** -(s - 0.5 - 1.0 / p_int))
        logger.debug("vz probe N=%d: max ratio %.3e", N, report.max_ratio[-1])
    report.fit = fit_loglog(report.N_list, report.max_ratio)
    return report


def iz_second_moment(
    alpha: float, p: IParams, M: int, family: str = "gaussian"
) -> float:
    """E ||Iz||_{L^2}^2 = sum_n m(n)^2 <n>^(-2 alpha) E|g_n|^2."""
    fam = get_family(family)
    n = np.arange(1, M + 1)
    weights = i_multiplier(n, p) ** 2 * japanese(n) ** (-2 * alpha)
    return fam.zero_moment(2) + 2.0 * fam.abs_moment(1) * float(np.sum(weights))


@dataclass
class IzMomentReport:
    alpha: float
    N: float
    p_int: float
    moment: Estimate
    raw_moment: Estimate
    ratio: float
    exact_second_moment: float | None = None


def iz_moment_check(
    alpha: float,
    p: IParams,
    p_int: float,
    n_samples: int,
    family: str = "gaussian",
    seed: int = 0,
    threads: int = 1,
    M: int | None = None,
) -> IzMomentReport:
    """(E ||Iz||_{L^p}^p)^(1/p) / (p^(1/2) phi_{2 alpha}(N)^(1/2))."""
    if p_int < 2:
        raise ParameterError(f"p_int must be >= 2, got {p_int}")
    M = 8 * int(math.ceil(p.N)) if M is None else M
    # |Iz|^p has band p*M for even p; the grid resolves its mean
    grid = max(2 * M + 1, int(math.ceil(p_int)) * M + 2)
    spec = RandomDataSpec(family, alpha, M, seed)

    def lp_norm(member: int) -> float:
        z = sample_initial_data(spec.with_seed(member))
        return wsp_norm(apply_i(z, p), 0.0, p_int, grid)

    norms = map_members(lp_norm, member_seeds(seed, n_samples), threads)
    norms = np.asarray(norms)
    moment = estimate_root_moment(norms, p_int)
    scale = math.sqrt(p_int) * math.sqrt(phi_beta(int(p.N), 2 * alpha))
    exact = iz_second_moment(alpha, p, M, family) if p_int == 2 else None
    return IzMomentReport(
        alpha,
        p.N,
        p_int,
        moment,
        estimate_mean(norms**p_int),
        moment.mean / scale,
        exact,
    )
