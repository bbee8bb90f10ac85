import math
from dataclasses import dataclass, field

import pandas as pd

EXIT_PASS = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2


@dataclass
class Check:
    """One tolerance comparison of an experiment against the claim it tests."""

    name: str
    claim: str
    passed: bool
    observed: float | None = None
    threshold: float | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "observed": _json_number(self.observed),
            "threshold": _json_number(self.threshold),
            "passed": bool(self.passed),
        }


def _json_number(value: float | None):
    if value is None:
        return None
    value = float(value)
    if math.isfinite(value):
        return value
    return "inf" if value > 0 else ("-inf" if value < 0 else "nan")


@dataclass
class ExperimentResult:
    kind: str
    claim: str
    data: pd.DataFrame
    checks: list[Check] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    member_seeds: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def exit_status(self) -> int:
        return EXIT_PASS if self.passed else EXIT_TOLERANCE

    def add(
        self,
        name: str,
        claim: str,
        passed: bool,
        observed: float | None = None,
        threshold: float | None = None,
    ) -> Check:
        check = Check(name, claim, bool(passed), observed, threshold)
        self.checks.append(check)
        return check
