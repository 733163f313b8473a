"""
Identity suites, their result objects and the trajectory log of a run.
"""
from .base import CheckResult, Suite, relative_error
from .suites import SUITE_NAMES, all_suites, random_params, run_suites, suite_by_name
from .trajectory import StepStatus, Trajectory, TrajectoryLogger, TrajectoryStep

__all__ = [
    "CheckResult",
    "Suite",
    "relative_error",
    "SUITE_NAMES",
    "all_suites",
    "random_params",
    "run_suites",
    "suite_by_name",
    "StepStatus",
    "Trajectory",
    "TrajectoryLogger",
    "TrajectoryStep",
]
