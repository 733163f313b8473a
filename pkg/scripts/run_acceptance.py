#!/usr/bin/env python3
"""
Acceptance run: the classical anchor plus every identity suite at its
default sample count.

Usage:
    python scripts/run_acceptance.py [--seed 0] [--trajectory-out run.json]
"""
import argparse
import json
import sys
import time
from pathlib import Path

# Add parent directory to path to import src modules
sys.path.append(str(Path(__file__).parent.parent))

from src.checks import all_suites, run_suites
from src.core import ParameterVector, theta_eval

CLASSICAL_VALUE = 1.086434811213308


def check_anchor() -> bool:
    start = time.perf_counter()
    result = theta_eval(ParameterVector.of(0, 1j), 1e-14)
    elapsed_ms = (time.perf_counter() - start) * 1000
    miss = abs(result.value - CLASSICAL_VALUE)
    ok = miss <= 1e-12
    mark = "✓" if ok else "✗"
    print(f"{mark} anchor: Theta(0, i) = {result.value.real!r} (miss {miss:.2e}, {elapsed_ms:.2f} ms)", flush=True)
    return ok


def run(seed: int, trajectory_out: Path = None) -> int:
    print("=" * 50)
    print(f"Acceptance run (seed {seed})")
    print("=" * 50)

    ok = check_anchor()
    trajectories = []
    for suite in all_suites():
        start = time.perf_counter()
        results, trajectory = run_suites([suite], seed=seed, run_name=suite.name)
        trajectories.append(trajectory)
        failed = [r for r in results if not r.passed]
        worst = max((r.relative_error for r in results), default=0.0)
        mark = "✓" if not failed else "✗"
        print(
            f"{mark} {suite.name}: {len(results) - len(failed)}/{len(results)} passed, "
            f"max rel {worst:.2e}, {time.perf_counter() - start:.1f} s",
            flush=True,
        )
        for r in failed[:5]:
            print(f"    ✗ {r.name}: rel={r.relative_error:.3e} thr={r.threshold:.1e} {r.error or ''}")
        ok = ok and not failed

    if trajectory_out is not None:
        trajectory_out.write_text(json.dumps([t.to_dict() for t in trajectories], indent=2, default=str))
        print(f"Trajectories written to {trajectory_out}")

    print("=" * 50)
    print("✅ All acceptance checks passed" if ok else "❌ Acceptance checks failed")
    return 0 if ok else 3


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run every acceptance suite")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trajectory-out", type=Path)
    args = parser.parse_args()
    sys.exit(run(args.seed, args.trajectory_out))
