import logging
from pathlib import Path

from app.config.experiment import ExperimentConfig
from app.experiments.results import (
    EXIT_CONFIG,
    EXIT_PASS,
    EXIT_TOLERANCE,
    Check,
    ExperimentResult,
)
from app.experiments.runner import CLAIMS, RUNNERS, run_experiment
from app.experiments.validate import Diagnostic, validate
from app.experiments.writer import write_result

logger = logging.getLogger(__name__)

__all__ = [
    "CLAIMS",
    "Check",
    "Diagnostic",
    "EXIT_CONFIG",
    "EXIT_PASS",
    "EXIT_TOLERANCE",
    "ExperimentResult",
    "RUNNERS",
    "run",
    "run_experiment",
    "validate",
    "write_result",
]


def run(cfg: ExperimentConfig) -> tuple[int, Path]:
    """Run the configured experiment and write its artifacts.

    Returns the exit status (0 pass, 1 tolerance failure) and the run directory.
    """
    result = run_experiment(cfg)
    run_dir = write_result(cfg, result)
    for check in result.checks:
        if not check.passed:
            logger.warning("Check failed: %s (%s)", check.name, check.claim)
    return result.exit_status, run_dir
