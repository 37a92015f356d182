"""
MomentLab Check Engine - Named numerical checks and the run report.

This module provides the CheckRunner, which executes registered checks in
order, times them, and turns their outcomes into CheckRecords collected in
a RunReport.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from momentlab.core.sampling import RNG_ALGORITHM
from momentlab.errors import MomentLabError

logger = logging.getLogger(__name__)


class CheckStatus(Enum):
    """Status of a numerical check."""

    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


@dataclass
class Measurement:
    """
    Outcome of a check function.

    A check passes when ``residual <= tolerance`` and ``holds`` is true;
    ``holds`` carries conditions beyond the residual (signs, orders).
    """

    residual: float
    holds: bool = True
    detail: str = ""


CheckFn = Callable[[], Union[float, Measurement]]


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass
class CheckRecord:
    """Result of one named check."""

    name: str
    status: CheckStatus
    residual: Optional[float]
    tolerance: float
    detail: str = ""
    wall_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        """Convert record to a dictionary; wall_ms only on request."""
        data: Dict[str, Any] = {
            "name": self.name,
            "status": self.status.value,
            "residual": _finite_or_none(self.residual),
            "tolerance": self.tolerance,
            "detail": self.detail,
        }
        if include_timing:
            data["wall_ms"] = self.wall_ms
        return data


@dataclass
class RunReport:
    """
    Records of one run plus its header.

    The report passes iff every record passes. ``to_dict`` leaves out
    wall-clock data so identical runs serialize identically.
    """

    kind: str
    seed: int
    level: Optional[str] = None
    records: List[CheckRecord] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def timings(self) -> Dict[str, float]:
        return {r.name: r.wall_ms for r in self.records}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "level": self.level,
            "rng": RNG_ALGORITHM,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.records],
            "artifacts": sorted(self.artifacts),
            "warnings": list(self.warnings),
        }


def evaluate(name: str, tolerance: float, check: CheckFn) -> CheckRecord:
    """
    Run one check and classify it.

    Library errors become ERROR records carrying the error's residual or
    margin when it has one; anything else propagates.
    """
    started = time.perf_counter()
    try:
        outcome = check()
    except MomentLabError as e:
        wall_ms = (time.perf_counter() - started) * 1000.0
        evidence = getattr(e, "residual", getattr(e, "margin", None))
        logger.warning("check %s raised %s: %s", name, type(e).__name__, e)
        return CheckRecord(
            name=name,
            status=CheckStatus.ERROR,
            residual=evidence if isinstance(evidence, float) else None,
            tolerance=tolerance,
            detail=f"{type(e).__name__}: {e}",
            wall_ms=wall_ms,
        )
    wall_ms = (time.perf_counter() - started) * 1000.0

    if not isinstance(outcome, Measurement):
        outcome = Measurement(float(outcome))
    verdict = bool(outcome.residual <= tolerance and outcome.holds)
    status = CheckStatus.PASSED if verdict else CheckStatus.FAILED
    log = logger.info if verdict else logger.warning
    log(
        "check %s %s (residual %.3e, tolerance %.1e)",
        name,
        status.value,
        outcome.residual,
        tolerance,
    )
    return CheckRecord(name, status, float(outcome.residual), tolerance, outcome.detail, wall_ms)


class CheckRunner:
    """
    Ordered collection of named checks.

    Example:
        >>> runner = CheckRunner()
        >>> runner.register("forms.dd_zero", 1e-12, lambda: dd_residual(grid))
        >>> report = runner.run(RunReport(kind="verify", seed=1))
    """

    def __init__(self) -> None:
        self._checks: List[Tuple[str, float, CheckFn]] = []

    def register(self, name: str, tolerance: float, check: CheckFn) -> None:
        """
        Register a check.

        Args:
            name: Record name, unique within the runner.
            tolerance: Pass threshold for the residual.
            check: Callable returning a residual or a Measurement.
        """
        if any(existing == name for existing, _, _ in self._checks):
            raise ValueError(f"duplicate check name: {name}")
        self._checks.append((name, tolerance, check))

    @property
    def names(self) -> List[str]:
        return [name for name, _, _ in self._checks]

    def run(self, report: RunReport) -> RunReport:
        """Execute every check in registration order, appending to ``report``."""
        for name, tolerance, check in self._checks:
            report.add(evaluate(name, tolerance, check))
        logger.info(
            "%s: %d checks, %d failing", report.kind, len(report.records), len(report.failures())
        )
        return report
