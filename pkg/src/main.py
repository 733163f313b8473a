"""
Command-line entry point: python -m src.main <command> [flags].

Exit codes: 0 success, 1 malformed input, 2 domain error (including range
overflow and complex-offset divergence), 3 a check failed.
"""
import argparse
import csv
import json
import sys
from typing import IO, Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from src.characteristics import chain_consistency, chain_project, embed, enumerate_chars
from src.checks import CheckResult, relative_error, run_suites, suite_by_name, all_suites
from src.config import settings
from src.core import MultiIndex, ParameterVector, theta_derivative, theta_eval, theta_eval_offset
from src.errors import (
    ComplexOffsetDivergence,
    DegeneratePoint,
    DimensionMismatch,
    DimensionTooSmall,
    DomainError,
    InvalidJob,
    RangeOverflow,
    ThetaError,
)
from src.heisenberg import (
    GroupElement,
    apply_S,
    apply_T,
    group_inverse,
    group_multiply,
    lattice_shift,
    matrix_rep,
    scaled_tol,
)
from src.pde import builtin_pdes, pde_residual
from src.schemas import (
    ChainResponse,
    CheckEntry,
    CheckResponse,
    Command,
    EmbedResponse,
    EvalResponse,
    GridRow,
    GroupElementWire,
    GroupOp,
    GroupResponse,
    JobConfig,
    OutputFormat,
    pair,
    unpair,
)

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_DOMAIN = 2
EXIT_CHECK_FAILED = 3

_DOMAIN_ERRORS = (DomainError, RangeOverflow, ComplexOffsetDivergence, DimensionTooSmall, DegeneratePoint)


class Outcome(BaseModel):
    """A response model plus whether every check in it passed."""
    response: Any
    passed: bool = True


# ============================================================================
# Helpers
# ============================================================================

def _params(config: JobConfig) -> ParameterVector:
    return ParameterVector(taus=[unpair(p) for p in config.params])


def _entry(result: CheckResult) -> CheckEntry:
    return CheckEntry(
        name=result.name,
        relative_error=result.relative_error,
        threshold=result.threshold,
        passed=result.passed,
        error=result.error,
    )


def _threshold(config: JobConfig) -> float:
    return settings.residual_constant * config.tol


def _element(wire: GroupElementWire) -> GroupElement:
    return GroupElement(phase=wire.phase, a=unpair(wire.a), b=[unpair(x) for x in wire.b])


def _eval_response(result) -> EvalResponse:
    return EvalResponse(value=pair(result.value), tail_bound=result.tail_bound, n_range=result.n_range)


# ============================================================================
# Commands
# ============================================================================

def cmd_eval(config: JobConfig) -> Outcome:
    params = _params(config)
    if config.a is not None:
        return Outcome(response=_eval_response(theta_eval_offset(params, unpair(config.a), config.tol)))
    return Outcome(response=_eval_response(theta_eval(params, config.tol)))


def cmd_derive(config: JobConfig) -> Outcome:
    params = _params(config)
    if len(config.alpha) != params.N:
        raise InvalidJob("alpha", f"expected {params.N} orders, got {len(config.alpha)}")
    alpha = MultiIndex(orders=tuple(config.alpha))
    return Outcome(response=_eval_response(theta_derivative(alpha, params, config.tol)))


def cmd_quasiperiod(config: JobConfig) -> Outcome:
    """Theta(shifted_params(a)) against exp(-2 pi i phi(a)) * Theta_a."""
    params = _params(config)
    a = unpair(config.a)
    multiplier, moved = apply_T(a, params)
    lhs = theta_eval(moved, scaled_tol(config.tol, multiplier)).value
    rhs = multiplier * theta_eval_offset(params, a, config.tol).value
    check = CheckResult.judge("quasiperiod", relative_error(lhs, rhs), _threshold(config))
    response = CheckResponse(
        passed=check.passed,
        checks=[_entry(check)],
        values={"shifted": pair(lhs), "multiplied": pair(rhs), "multiplier": pair(multiplier)},
    )
    return Outcome(response=response, passed=check.passed)


def cmd_lattice(config: JobConfig) -> Outcome:
    params = _params(config)
    if len(config.b) != params.N:
        raise InvalidJob("b", f"expected {params.N} integers, got {len(config.b)}")
    before = theta_eval(params, config.tol).value
    after = theta_eval(apply_S(lattice_shift(config.b), params), config.tol).value
    check = CheckResult.judge("lattice", relative_error(after, before), _threshold(config))
    response = CheckResponse(
        passed=check.passed,
        checks=[_entry(check)],
        values={"before": pair(before), "after": pair(after)},
    )
    return Outcome(response=response, passed=check.passed)


def cmd_pde(config: JobConfig) -> Outcome:
    params = _params(config)
    threshold = _threshold(config)
    checks = []
    values = {}
    for spec in builtin_pdes(params.N):
        result = pde_residual(spec, params, config.tol)
        checks.append(CheckResult.judge(spec.name, result.relative, threshold, scale=result.scale))
        values[spec.name] = pair(result.residual)
    passed = all(c.passed for c in checks)
    return Outcome(
        response=CheckResponse(passed=passed, checks=[_entry(c) for c in checks], values=values),
        passed=passed,
    )


def cmd_embed(config: JobConfig) -> Outcome:
    params = _params(config)
    point = embed(params, config.level, config.tol)
    chars = enumerate_chars(config.level, params.N)
    response = EmbedResponse(
        level=config.level,
        count=len(point),
        characteristics=[str(c) for c in chars],
        coordinates=[pair(c) for c in point.coords],
    )
    return Outcome(response=response)


def cmd_group(config: JobConfig) -> Outcome:
    g1 = _element(config.g1)
    if config.op == GroupOp.MULTIPLY:
        result = group_multiply(g1, _element(config.g2))
    elif config.op == GroupOp.INVERSE:
        result = group_inverse(g1)
    else:
        result = g1
    matrix = None
    if config.op == GroupOp.MATRIX:
        matrix = [[pair(x) for x in row] for row in matrix_rep(result).entries]
    response = GroupResponse(
        phase=pair(result.phase),
        a=pair(result.a),
        b=[pair(x) for x in result.b],
        lambda_value=pair(result.lambda_value),
        matrix=matrix,
    )
    return Outcome(response=response)


def cmd_chain(config: JobConfig) -> Outcome:
    params = _params(config)
    projected, differentiated = chain_consistency(params, config.tol)
    check = CheckResult.judge("chain", relative_error(differentiated, projected), _threshold(config))
    response = ChainResponse(
        params=[pair(t) for t in chain_project(params).taus],
        projected=pair(projected),
        differentiated=pair(differentiated),
        checks=[_entry(check)],
    )
    return Outcome(response=response, passed=check.passed)


def cmd_check_all(config: JobConfig) -> Outcome:
    if config.suites:
        try:
            suites = [suite_by_name(name) for name in config.suites]
        except KeyError as e:
            raise InvalidJob("suites", str(e.args[0]), e)
    else:
        suites = all_suites()
    results, trajectory = run_suites(suites, seed=config.seed, samples=config.samples, run_name="check-all")
    passed = all(r.passed for r in results)
    response = CheckResponse(
        passed=passed,
        checks=[_entry(r) for r in results],
        trajectory=trajectory.to_dict() if config.trajectory else None,
    )
    return Outcome(response=response, passed=passed)


def emit_grid(config: JobConfig, stream: IO[str]) -> int:
    """
    Row-major CSV sweep over one or two axes. Points that raise a domain
    error produce a row with the error column filled instead of aborting.

    Returns:
        Number of rows that carry an error
    """
    base = [unpair(p) for p in config.params]
    for axis in config.grid:
        if axis.index > len(base):
            raise InvalidJob("grid", f"axis {axis.label} refers past tau_{len(base)}")
    sweeps = [np.linspace(axis.start, axis.end, axis.count) for axis in config.grid]

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([axis.label for axis in config.grid] + ["re", "im", "abs", "tail_bound", "error"])
    failures = 0
    for point in _grid_points(sweeps):
        taus = list(base)
        for axis, value in zip(config.grid, point):
            old = taus[axis.index - 1]
            taus[axis.index - 1] = complex(value, old.imag) if axis.part == "re" else complex(old.real, value)
        sweep = [float(v) for v in point]
        try:
            result = theta_eval(ParameterVector(taus=taus), config.tol)
            row = GridRow(
                sweep=sweep,
                re=result.value.real,
                im=result.value.imag,
                abs=abs(result.value),
                tail_bound=result.tail_bound,
            )
        except _DOMAIN_ERRORS as e:
            failures += 1
            row = GridRow(sweep=sweep, error=f"{type(e).__name__}: {e}")
        writer.writerow(row.as_csv())
    return failures


def _grid_points(sweeps: List[np.ndarray]):
    if len(sweeps) == 1:
        for x in sweeps[0]:
            yield (x,)
    else:
        for x in sweeps[0]:
            for y in sweeps[1]:
                yield (x, y)


_COMMANDS = {
    Command.EVAL: cmd_eval,
    Command.DERIVE: cmd_derive,
    Command.QUASIPERIOD: cmd_quasiperiod,
    Command.LATTICE: cmd_lattice,
    Command.PDE: cmd_pde,
    Command.EMBED: cmd_embed,
    Command.GROUP: cmd_group,
    Command.CHAIN: cmd_chain,
    Command.CHECK_ALL: cmd_check_all,
}


def _write_csv(response: EvalResponse, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["re", "im", "abs", "tail_bound", "n_min", "n_max"])
    re, im = response.value
    writer.writerow([repr(re), repr(im), repr(abs(complex(re, im))), repr(response.tail_bound), *response.n_range])


def run(config: JobConfig, stdin: IO[str] = None, stdout: IO[str] = None, stderr: IO[str] = None) -> int:
    """
    Execute one job and write its result to stdout.

    Returns:
        Process exit code (see module docstring)
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if config.command == Command.GRID:
            emit_grid(config, stdout)
            return EXIT_OK
        outcome = _COMMANDS[config.command](config)
        if config.output == OutputFormat.CSV:
            if not isinstance(outcome.response, EvalResponse):
                raise InvalidJob("output", "csv is only available for eval, derive and grid")
            _write_csv(outcome.response, stdout)
        else:
            stdout.write(outcome.response.model_dump_json(by_alias=True, exclude_none=True) + "\n")
    except InvalidJob as e:
        stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED
    except ValidationError as e:
        # library models rejecting values the job schema let through
        stderr.write(f"error: {_invalid_job(e, config.command.value)}\n")
        return EXIT_MALFORMED
    except DimensionMismatch as e:
        stderr.write(f"error: params: {e}\n")
        return EXIT_MALFORMED
    except _DOMAIN_ERRORS as e:
        stderr.write(f"domain error: {type(e).__name__}: {e}\n")
        return EXIT_DOMAIN
    except ThetaError as e:
        stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_MALFORMED
    return EXIT_OK if outcome.passed else EXIT_CHECK_FAILED


# ============================================================================
# Argument parsing
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gtf", description="Generalized theta function toolkit")
    parser.add_argument("command", nargs="?", choices=[c.value for c in Command])
    parser.add_argument("--job", help="JSON job file ('-' reads stdin); flags override its fields")
    parser.add_argument("--params", help='JSON list of [re, im] pairs, e.g. "[[0,0],[0,1]]"')
    parser.add_argument("--tol", type=float)
    parser.add_argument("--level", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--output", choices=[o.value for o in OutputFormat])
    parser.add_argument("--grid", action="append", help="axis:start:end:count, e.g. re1:0:1:11 (repeatable)")
    parser.add_argument("--a", help="offset / quasi-period shift: a number or [re, im]")
    parser.add_argument("--alpha", help="derivative orders as a comma list, e.g. 2,1,0,0")
    parser.add_argument("--b", help="integer lattice shift as a comma list")
    parser.add_argument("--samples", type=int, help="cases per randomized suite")
    parser.add_argument("--suite", action="append", dest="suites", help="restrict check-all (repeatable)")
    parser.add_argument("--trajectory", action="store_true", default=None, help="attach the suite trajectory")
    parser.add_argument("--op", choices=[o.value for o in GroupOp])
    parser.add_argument("--g1", help='group element JSON {"phase":..,"a":[re,im],"b":[[re,im],..]}')
    parser.add_argument("--g2", help="second group element for multiply")
    return parser


def _int_list(field: str, text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise InvalidJob(field, f"expected a comma list of integers, got {text!r}", e)


def _json_field(field: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidJob(field, f"invalid JSON: {e.msg}", e)


def build_config(args: argparse.Namespace, stdin: IO[str] = None) -> JobConfig:
    """Merge the job file (if any) with flags; flags override."""
    data: Dict[str, Any] = {}
    if args.job:
        source = (stdin or sys.stdin).read() if args.job == "-" else _read(args.job)
        data = _json_field("job", source)
        if not isinstance(data, dict):
            raise InvalidJob("job", "the job file must hold a JSON object")

    if args.command:
        data["command"] = args.command
    for name in ("tol", "level", "seed", "output", "samples", "op", "trajectory", "suites", "grid"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    for name in ("params", "g1", "g2"):
        value = getattr(args, name)
        if value is not None:
            data[name] = _json_field(name, value)
    if args.a is not None:
        data["a"] = _json_field("a", args.a)
    if args.alpha is not None:
        data["alpha"] = _int_list("alpha", args.alpha)
    if args.b is not None:
        data["b"] = _int_list("b", args.b)

    try:
        return JobConfig.model_validate(data)
    except ValidationError as e:
        raise _invalid_job(e)


def _invalid_job(error: ValidationError, default: str = "job") -> InvalidJob:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or _field_from_message(first["msg"])
    return InvalidJob(field or default, first["msg"], error)


def _field_from_message(message: str) -> Optional[str]:
    # model-level messages are written as "<field>: ..."
    text = message.removeprefix("Value error, ")
    head, sep, _ = text.partition(":")
    return head if sep and head.isidentifier() else None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise InvalidJob("job", f"cannot read {path}: {e.strerror}", e)


def main(argv: Sequence[str] = None, stdin: IO[str] = None, stdout: IO[str] = None, stderr: IO[str] = None) -> int:
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        config = build_config(args, stdin)
    except InvalidJob as e:
        stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED
    return run(config, stdin, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
