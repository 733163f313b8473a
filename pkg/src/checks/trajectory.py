"""
Trajectory log for identity-suite runs.

Every suite run is a Trajectory; every check inside it is a TrajectoryStep
carrying its status, timing, input/output summaries and error text. The CLI
attaches the serialised trajectory to check output with --trajectory.
"""
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional


def _now() -> datetime:
    return datetime.now(timezone.utc)


class StepStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    SUCCESS = "success"
    FAILED = "failed"


@dataclass
class TrajectoryStep:
    """One check inside a suite run."""
    step_number: int
    check_name: str
    suite: str
    status: StepStatus = StepStatus.PENDING

    started_at: Optional[datetime] = None
    duration_ms: Optional[float] = None
    _clock: Optional[float] = field(default=None, repr=False)

    input_summary: Optional[str] = None
    output_summary: Optional[str] = None
    error: Optional[str] = None
    error_type: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def start(self):
        self.status = StepStatus.RUNNING
        self.started_at = _now()
        self._clock = time.perf_counter()

    def _stop(self):
        if self._clock is not None:
            self.duration_ms = (time.perf_counter() - self._clock) * 1000

    def complete(self, output_summary: str = None, **metadata):
        self.status = StepStatus.SUCCESS
        self.output_summary = output_summary
        self.metadata.update(metadata)
        self._stop()

    def fail(self, error: str, error_type: str = None, **metadata):
        self.status = StepStatus.FAILED
        self.error = error
        self.error_type = error_type
        self.metadata.update(metadata)
        self._stop()

    def to_dict(self) -> dict:
        result = {
            "step_number": self.step_number,
            "check_name": self.check_name,
            "suite": self.suite,
            "status": self.status.value,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "duration_ms": self.duration_ms,
            "input_summary": self.input_summary,
            "output_summary": self.output_summary,
        }
        if self.error:
            result["error"] = self.error
            result["error_type"] = self.error_type
        if self.metadata:
            result["metadata"] = self.metadata
        return result


@dataclass
class Trajectory:
    """A full suite run with aggregate statistics."""
    run_name: str
    seed: Optional[int] = None
    started_at: datetime = field(default_factory=_now)
    completed_at: Optional[datetime] = None
    steps: List[TrajectoryStep] = field(default_factory=list)
    success: bool = False
    final_error: Optional[str] = None

    def add_step(self, check_name: str, suite: str, input_summary: str = None) -> TrajectoryStep:
        step = TrajectoryStep(
            step_number=len(self.steps) + 1,
            check_name=check_name,
            suite=suite,
            input_summary=input_summary,
        )
        self.steps.append(step)
        return step

    def complete(self, success: bool = True, error: str = None):
        self.completed_at = _now()
        self.success = success
        self.final_error = error

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def success_count(self) -> int:
        return sum(1 for s in self.steps if s.status == StepStatus.SUCCESS)

    @property
    def failed_count(self) -> int:
        return sum(1 for s in self.steps if s.status == StepStatus.FAILED)

    @property
    def total_duration_ms(self) -> Optional[float]:
        if self.completed_at is None:
            return None
        return (self.completed_at - self.started_at).total_seconds() * 1000

    def get_statistics(self) -> dict:
        durations = [s.duration_ms for s in self.steps if s.duration_ms is not None]
        slowest = max(self.steps, key=lambda s: s.duration_ms or 0.0, default=None)
        return {
            "total_steps": self.step_count,
            "successful_steps": self.success_count,
            "failed_steps": self.failed_count,
            "total_duration_ms": self.total_duration_ms,
            "avg_step_duration_ms": sum(durations) / len(durations) if durations else None,
            "slowest_step": slowest.check_name if slowest and durations else None,
        }

    def to_dict(self) -> dict:
        return {
            "run_name": self.run_name,
            "seed": self.seed,
            "started_at": self.started_at.isoformat(),
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
            "success": self.success,
            "final_error": self.final_error,
            "statistics": self.get_statistics(),
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=str)

    def __repr__(self) -> str:
        status = "SUCCESS" if self.success else "FAILED"
        return f"<Trajectory: {self.run_name} [{status}] {self.step_count} steps>"


class TrajectoryLogger:
    """
    Usage:
        log = TrajectoryLogger("check-all", seed=0)
        step = log.start_step("quasiperiod[3]", "quasiperiod", "N=4 a=2")
        log.complete_step(step, "rel=3e-14")
        trajectory = log.finish()
    """

    def __init__(self, run_name: str, seed: int = None):
        self.trajectory = Trajectory(run_name=run_name, seed=seed)

    def start_step(self, check_name: str, suite: str, input_summary: str = None) -> TrajectoryStep:
        step = self.trajectory.add_step(check_name, suite, input_summary)
        step.start()
        return step

    def complete_step(self, step: TrajectoryStep, output_summary: str = None, **metadata):
        step.complete(output_summary, **metadata)

    def fail_step(self, step: TrajectoryStep, error: str, error_type: str = None, **metadata):
        step.fail(error, error_type, **metadata)

    def finish(self) -> Trajectory:
        failed = self.trajectory.failed_count
        self.trajectory.complete(
            success=failed == 0,
            error=f"{failed} of {self.trajectory.step_count} checks failed" if failed else None,
        )
        return self.trajectory
