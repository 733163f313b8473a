"""
Wire formats of the command-line surface.

Complex numbers travel as [re, im] pairs; parameter vectors as lists of
pairs with index 0 = tau_1. Every response re-parses with model_validate.
"""
import re
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, field_validator, model_validator

ComplexPair = Tuple[float, float]


def pair(z: complex) -> ComplexPair:
    z = complex(z)
    return (z.real, z.imag)


def unpair(p) -> complex:
    if isinstance(p, (int, float)):
        return complex(p)
    return complex(p[0], p[1])


class Command(str, Enum):
    EVAL = "eval"
    DERIVE = "derive"
    QUASIPERIOD = "quasiperiod"
    LATTICE = "lattice"
    PDE = "pde"
    EMBED = "embed"
    GROUP = "group"
    GRID = "grid"
    CHECK_ALL = "check-all"
    CHAIN = "chain"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class GroupOp(str, Enum):
    MULTIPLY = "multiply"
    INVERSE = "inverse"
    MATRIX = "matrix"


_AXIS = re.compile(r"^(re|im)(\d+)$")


class GridAxis(BaseModel):
    """One sweep axis: the real or imaginary part of tau_index."""
    part: str
    index: int = Field(..., ge=1)
    start: float
    end: float
    count: int = Field(..., ge=1)

    @field_validator("part")
    @classmethod
    def _part(cls, value: str) -> str:
        if value not in ("re", "im"):
            raise ValueError(f"part must be 're' or 'im', got {value!r}")
        return value

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        """'re1:0:1:11' sweeps real(tau_1) over [0, 1] in 11 points."""
        fields = text.split(":")
        if len(fields) != 4:
            raise ValueError(f"grid axis {text!r} must look like re1:start:end:count")
        match = _AXIS.match(fields[0])
        if not match:
            raise ValueError(f"grid axis name {fields[0]!r} must be re<k> or im<k>")
        return cls(
            part=match.group(1),
            index=int(match.group(2)),
            start=float(fields[1]),
            end=float(fields[2]),
            count=int(fields[3]),
        )

    @property
    def label(self) -> str:
        return f"{self.part}(tau_{self.index})"


class GroupElementWire(BaseModel):
    phase: float = 0.0
    a: ComplexPair = (0.0, 0.0)
    b: List[ComplexPair]

    @field_validator("b")
    @classmethod
    def _even_length(cls, value: List[ComplexPair]) -> List[ComplexPair]:
        if len(value) < 2 or len(value) % 2:
            raise ValueError(f"needs an even number >= 2 of entries, got {len(value)}")
        return value


class JobConfig(BaseModel):
    """One CLI invocation, from flags or a JSON job file (flags win)."""
    command: Command
    params: Optional[List[ComplexPair]] = None
    tol: float = 1e-12
    seed: int = 0
    output: OutputFormat = OutputFormat.JSON
    level: int = Field(1, ge=1)
    a: Optional[ComplexPair] = None
    alpha: Optional[List[NonNegativeInt]] = None
    b: Optional[List[int]] = None
    grid: List[GridAxis] = Field(default_factory=list)
    samples: Optional[int] = Field(None, ge=1)
    suites: Optional[List[str]] = None
    trajectory: bool = False
    op: GroupOp = GroupOp.MULTIPLY
    g1: Optional[GroupElementWire] = None
    g2: Optional[GroupElementWire] = None

    model_config = ConfigDict(extra="forbid")

    @field_validator("tol")
    @classmethod
    def _tol_range(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError(f"tol must lie in (0, 1), got {value}")
        return value

    @field_validator("grid", mode="before")
    @classmethod
    def _grid_strings(cls, value):
        if value is None:
            return []
        return [GridAxis.parse(v) if isinstance(v, str) else v for v in value]

    # a bare real number is accepted wherever a complex pair is expected
    @field_validator("a", mode="before")
    @classmethod
    def _real_offset(cls, value):
        if isinstance(value, (int, float)):
            return (float(value), 0.0)
        return value

    @field_validator("params", mode="before")
    @classmethod
    def _real_entries(cls, value):
        if isinstance(value, list):
            return [(float(v), 0.0) if isinstance(v, (int, float)) else v for v in value]
        return value

    @model_validator(mode="after")
    def _required_fields(self) -> "JobConfig":
        needs_params = self.command not in (Command.GROUP, Command.CHECK_ALL)
        if needs_params and not self.params:
            raise ValueError(f"params: required for command {self.command.value}")
        if self.command == Command.DERIVE and self.alpha is None:
            raise ValueError("alpha: required for command derive")
        if self.command == Command.QUASIPERIOD and self.a is None:
            raise ValueError("a: required for command quasiperiod")
        if self.command == Command.LATTICE and self.b is None:
            raise ValueError("b: required for command lattice")
        if self.command == Command.GRID and not 1 <= len(self.grid) <= 2:
            raise ValueError("grid: one or two axes required for command grid")
        if self.command == Command.GROUP and self.g1 is None:
            raise ValueError("g1: required for command group")
        if self.command == Command.GROUP and self.op == GroupOp.MULTIPLY and self.g2 is None:
            raise ValueError("g2: required for group multiply")
        return self


class CheckEntry(BaseModel):
    name: str
    relative_error: float
    threshold: float
    passed: bool = Field(..., alias="pass")
    error: Optional[str] = None

    model_config = ConfigDict(populate_by_name=True)


class EvalResponse(BaseModel):
    value: ComplexPair
    tail_bound: float
    n_range: Tuple[int, int]
    checks: List[CheckEntry] = Field(default_factory=list)


class CheckResponse(BaseModel):
    passed: bool
    checks: List[CheckEntry]
    values: Dict[str, ComplexPair] = Field(default_factory=dict)
    trajectory: Optional[Dict[str, Any]] = None


class GroupResponse(BaseModel):
    phase: ComplexPair
    a: ComplexPair
    b: List[ComplexPair]
    lambda_value: ComplexPair
    matrix: Optional[List[List[ComplexPair]]] = None


class EmbedResponse(BaseModel):
    level: int
    count: int
    characteristics: List[str]
    coordinates: List[ComplexPair]


class ChainResponse(BaseModel):
    params: List[ComplexPair]
    projected: ComplexPair
    differentiated: ComplexPair
    checks: List[CheckEntry]


def _cell(value: Optional[float]) -> str:
    return "" if value is None else repr(value)


class GridRow(BaseModel):
    sweep: List[float]
    re: Optional[float] = None
    im: Optional[float] = None
    abs: Optional[float] = None
    tail_bound: Optional[float] = None
    error: Optional[str] = None

    def as_csv(self) -> List[str]:
        return [repr(s) for s in self.sweep] + [
            _cell(self.re),
            _cell(self.im),
            _cell(self.abs),
            _cell(self.tail_bound),
            self.error or "",
        ]
