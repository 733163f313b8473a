"""
Rational characteristics and theta functions with characteristics.

    Theta[a; b](tau) = sum_n exp(2 pi i sum_k (n + a)^k / k! * (tau_k + b_k))

with b_N = 0. At level l the characteristic a lives in (1/l)Z/Z and b_k in
(1/l^(N-k))Z/Z, which gives l^p characteristics, p = 1 + N(N-1)/2.
"""
import itertools
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from pydantic import BaseModel, field_validator, model_validator

from src.core.params import ParameterVector
from src.core.series import EvalResult, theta_eval, theta_eval_offset
from src.errors import DimensionMismatch
from src.heisenberg.operators import apply_S, apply_T, scaled_tol


def family_exponent(n_params: int) -> int:
    """p = 1 + N(N-1)/2."""
    return 1 + n_params * (n_params - 1) // 2


def family_size(level: int, n_params: int) -> int:
    return level ** family_exponent(n_params)


class Characteristic(BaseModel):
    """(a; b_1, ..., b_{N-1}) at level l, every entry reduced to [0, 1)."""
    a: Fraction
    b: Tuple[Fraction, ...]
    level: int

    model_config = {"frozen": True, "extra": "forbid", "arbitrary_types_allowed": True}

    @field_validator("a", mode="before")
    @classmethod
    def _coerce_a(cls, value):
        return Fraction(value) % 1

    @field_validator("b", mode="before")
    @classmethod
    def _coerce_b(cls, value):
        return tuple(Fraction(v) % 1 for v in value)

    @field_validator("level")
    @classmethod
    def _positive_level(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"level must be >= 1, got {value}")
        return value

    @model_validator(mode="after")
    def _denominators(self) -> "Characteristic":
        n = self.N
        if (self.a * self.level).denominator != 1:
            raise ValueError(f"a={self.a} is not in (1/{self.level})Z")
        for k, bk in enumerate(self.b, start=1):
            scale = self.level ** (n - k)
            if (bk * scale).denominator != 1:
                raise ValueError(f"b_{k}={bk} is not in (1/{scale})Z")
        return self

    @property
    def N(self) -> int:
        return len(self.b) + 1

    def shifts(self) -> Tuple[complex, ...]:
        """(b_1, ..., b_{N-1}, 0) as parameter translations."""
        return tuple(complex(bk) for bk in self.b) + (0j,)

    def scaled(self) -> Tuple[complex, ...]:
        """(1! b_1, 2! b_2, ..., (N-1)! b_{N-1}, 0): the embedding convention."""
        return tuple(complex(math.factorial(k) * bk) for k, bk in enumerate(self.b, start=1)) + (0j,)

    def __str__(self) -> str:
        return f"[{self.a}; {', '.join(str(x) for x in self.b)}]"


def enumerate_chars(level: int, n_params: int) -> List[Characteristic]:
    """
    All l^p characteristics, a varying fastest, then b_{N-1}, ..., b_1.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if n_params < 2 or n_params % 2:
        raise ValueError(f"N must be an even integer >= 2, got {n_params}")
    b_ranges = [
        [Fraction(i, level ** (n_params - k)) for i in range(level ** (n_params - k))]
        for k in range(1, n_params)
    ]
    a_range = [Fraction(i, level) for i in range(level)]
    chars = []
    for combo in itertools.product(*b_ranges, a_range):
        *b, a = combo
        chars.append(Characteristic(a=a, b=tuple(b), level=level))
    return chars


def _check_dims(shifts: Sequence[complex], params: ParameterVector) -> None:
    if len(shifts) != params.N:
        raise DimensionMismatch(f"characteristic is for N={len(shifts)}, parameters have N={params.N}")


def theta_with_shifts(a, shifts: Sequence[complex], params: ParameterVector, tol: float = None) -> EvalResult:
    """Theta_a at tau + shifts: the common core of every characteristic evaluation."""
    _check_dims(shifts, params)
    return theta_eval_offset(apply_S(shifts, params), complex(a), tol)


def theta_char_eval(ch: Characteristic, params: ParameterVector, tol: float = None) -> EvalResult:
    """Theta[a; b](tau) with the characteristic entries added as they stand."""
    return theta_with_shifts(ch.a, ch.shifts(), params, tol)


def theta_char_via_operators(ch: Characteristic, params: ParameterVector, tol: float = None) -> complex:
    """
    The same value assembled from operators: translate by b, apply T_a and
    divide out its multiplier exp(-2 pi i phi(a; tau + b)).
    """
    _check_dims(ch.shifts(), params)
    multiplier, moved = apply_T(complex(ch.a), apply_S(ch.shifts(), params))
    return theta_eval(moved, scaled_tol(tol, multiplier) if tol else None).value / multiplier
