"""
Result objects and the common contract of identity suites.

Check failures are values: a suite returns CheckResult objects built through
CheckResult.ok / CheckResult.fail and never raises for a failed identity.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from src.checks.trajectory import TrajectoryLogger
from src.errors import ThetaError


@dataclass
class CheckResult:
    """
    Attributes:
        name: Check identifier, e.g. "quasiperiod[17]"
        relative_error: Measured discrepancy
        threshold: Pass bound for relative_error
        passed: relative_error <= threshold (inverted for negative controls)
        error: Text of an exception raised while evaluating, if any
        metadata: Inputs and intermediate values worth reporting
    """
    name: str
    relative_error: float
    threshold: float
    passed: bool
    error: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def ok(cls, name: str, relative_error: float, threshold: float, **metadata) -> "CheckResult":
        return cls(name=name, relative_error=relative_error, threshold=threshold, passed=True, metadata=metadata)

    @classmethod
    def fail(
        cls,
        name: str,
        relative_error: float,
        threshold: float,
        error: str = None,
        **metadata,
    ) -> "CheckResult":
        return cls(
            name=name,
            relative_error=relative_error,
            threshold=threshold,
            passed=False,
            error=error,
            metadata=metadata,
        )

    @classmethod
    def judge(cls, name: str, relative_error: float, threshold: float, **metadata) -> "CheckResult":
        """ok when relative_error <= threshold, fail otherwise (NaN fails)."""
        if relative_error <= threshold:
            return cls.ok(name, relative_error, threshold, **metadata)
        return cls.fail(name, relative_error, threshold, **metadata)

    @classmethod
    def expect_failure(cls, name: str, relative_error: float, floor: float, **metadata) -> "CheckResult":
        """Negative control: passes when the discrepancy is at least `floor`."""
        if relative_error >= floor:
            return cls.ok(name, relative_error, floor, negative_control=True, **metadata)
        return cls.fail(name, relative_error, floor, error="negative control did not fail", **metadata)


def relative_error(actual: complex, expected: complex) -> float:
    return abs(actual - expected) / max(abs(expected), np.finfo(float).tiny)


class Suite(ABC):
    """
    One family of randomized identity checks.

    Subclasses implement cases(); run() times each case in the trajectory
    and turns library errors into failed results.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        ...

    @abstractmethod
    def cases(self, rng: np.random.Generator, samples: int) -> List:
        """Zero-argument callables returning a CheckResult."""

    def default_samples(self) -> int:
        return 20

    def run(self, rng: np.random.Generator, samples: int = None, log: TrajectoryLogger = None) -> List[CheckResult]:
        results = []
        for i, case in enumerate(self.cases(rng, samples or self.default_samples())):
            label = f"{self.name}[{i}]"
            step = log.start_step(label, self.name) if log else None
            try:
                result = case()
            except ThetaError as e:
                result = CheckResult.fail(label, float("inf"), 0.0, error=f"{type(e).__name__}: {e}")
            if not result.name:
                result.name = label
            if step is not None:
                summary = f"rel={result.relative_error:.3g} thr={result.threshold:.3g}"
                if result.passed:
                    log.complete_step(step, summary)
                else:
                    log.fail_step(step, result.error or summary, "check_failed")
            results.append(result)
        return results
