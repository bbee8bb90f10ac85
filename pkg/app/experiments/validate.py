"""Parameter-regime diagnostics for an experiment config. Never raises."""

import logging
from dataclasses import dataclass

from app.config.experiment import ExperimentConfig
from app.errors import BBMLabError
from app.inflation.data import case_parameters, condition_values, select_parameters

logger = logging.getLogger(__name__)

INFO = "info"
WARNING = "warning"
VIOLATION = "violation"


@dataclass(frozen=True)
class Diagnostic:
    level: str
    message: str

    def __str__(self) -> str:
        return f"[{self.level.upper()}] {self.message}"


def describe_regime(alpha: float) -> str:
    if alpha > 0.5:
        return (
            f"alpha={alpha} > 1/2: u0 lies in L^2 almost surely, "
            "no renormalization is needed"
        )
    if alpha > 0.25:
        return (
            f"alpha={alpha} in (1/4, 1/2]: u0 is a distribution, "
            "the renormalized N(z) converges in H^s for s < 2 alpha"
        )
    return (
        f"alpha={alpha} <= 1/4: N(z_k) fails to be a Cauchy sequence, "
        "the renormalized nonlinearity has no limit"
    )


def _nonlinearity(cfg: ExperimentConfig, out: list[Diagnostic]) -> None:
    alpha = cfg.section("random_data")["alpha"]
    nl = cfg.section("nonlinearity")
    if cfg.kind == "nz-convergence":
        if alpha <= 0.25:
            out.append(
                Diagnostic(
                    WARNING,
                    f"alpha={alpha} <= 1/4: N(z_k) is not Cauchy, "
                    "nz-convergence will refuse to run",
                )
            )
        elif alpha > 0.5:
            out.append(Diagnostic(VIOLATION, f"alpha={alpha} must be <= 1/2"))
        if nl["s2"] >= 2 * alpha:
            out.append(
                Diagnostic(
                    VIOLATION, f"s2={nl['s2']} must be below 2 alpha={2 * alpha}"
                )
            )
    if cfg.kind == "sharpness" and alpha > 0.25:
        out.append(
            Diagnostic(
                VIOLATION, f"the divergence diagnostic needs alpha <= 1/4, got {alpha}"
            )
        )
    if cfg.kind == "sharpness" and nl["test_mode"] == 0:
        out.append(Diagnostic(VIOLATION, "test_mode must be non-zero"))
    if cfg.kind == "chaos-moments":
        if not 0.25 < alpha <= 0.5:
            out.append(
                Diagnostic(
                    VIOLATION,
                    f"the quartic bound needs alpha in (1/4, 1/2], got {alpha}",
                )
            )
        if nl["quartic_s"] >= 2 * alpha:
            out.append(
                Diagnostic(
                    VIOLATION,
                    f"quartic_s={nl['quartic_s']} must be below 2 alpha={2 * alpha}",
                )
            )


def _imethod(cfg: ExperimentConfig, out: list[Diagnostic]) -> None:
    im = cfg.section("imethod")
    if not 0.5 < im["s"] < 1:
        out.append(Diagnostic(VIOLATION, f"imethod.s={im['s']} must lie in (1/2, 1)"))
    if im["N"] < 1:
        out.append(Diagnostic(VIOLATION, f"imethod.N={im['N']} must be >= 1"))
    if (im["kernel"] is None) != (im["k"] is None):
        out.append(
            Diagnostic(VIOLATION, "imethod.kernel and imethod.k must be set together")
        )


def _inflation(cfg: ExperimentConfig, out: list[Diagnostic]) -> None:
    section = cfg.section("inflation")
    s, p, n = section["s"], section["p"], section["n"]
    try:
        if section["search"]:
            params = select_parameters(s, p, n, section["delta"], section["theta"])
        else:
            params = case_parameters(
                s,
                p,
                section["N"],
                section["delta"],
                section["theta"],
                section["c_A"],
                section["c_R"],
                section["c_T"],
            )
    except BBMLabError as e:
        out.append(Diagnostic(VIOLATION, f"inflation parameters: {e}"))
        return
    out.append(
        Diagnostic(
            INFO,
            f"inflation case {params.case}: N={params.N:g}, A={params.A:.4g}, "
            f"R={params.R:.4g}, T={params.T:.4g}",
        )
    )
    for condition in condition_values(params, n):
        out.append(
            Diagnostic(
                INFO if condition.holds else WARNING,
                f"{condition.name}: {condition.lhs:.4g} vs {condition.rhs:.4g} "
                f"({'holds' if condition.holds else 'fails'})",
            )
        )


def _tails(cfg: ExperimentConfig, out: list[Diagnostic]) -> None:
    tl = cfg.section("tails")
    beta = 0.25 + 1.0 / tl["q"] if tl["beta"] is None else tl["beta"]
    if tl["q"] * beta <= 1:
        out.append(
            Diagnostic(VIOLATION, f"GRR needs q beta > 1, got q={tl['q']}, beta={beta}")
        )
    if tl["observable"] not in ("z", "nz"):
        out.append(Diagnostic(VIOLATION, f"unknown observable {tl['observable']!r}"))


def validate(cfg: ExperimentConfig) -> list[Diagnostic]:
    """Regime description plus every precondition the chosen kind depends on."""
    alpha = cfg.section("random_data")["alpha"]
    diagnostics = [Diagnostic(INFO, describe_regime(alpha))]
    _nonlinearity(cfg, diagnostics)
    if cfg.kind == "gwp-energy-trace":
        _imethod(cfg, diagnostics)
    if cfg.kind == "inflation":
        _inflation(cfg, diagnostics)
    if cfg.kind == "tails":
        _tails(cfg, diagnostics)
    for diagnostic in diagnostics:
        if diagnostic.level != INFO:
            logger.warning("%s", diagnostic.message)
    return diagnostics
