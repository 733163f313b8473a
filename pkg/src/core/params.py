"""
Parameter vectors, the phase polynomial and derivative multi-indices.

The phase polynomial

    phi(a) = sum_{k=1..N} a^k / k! * tau_k

is the single object everything else is built from: the theta series sums
exp(2 pi i phi(n)), its a-derivatives at a give the quasi-periodically
shifted parameters, and its coefficients tau_k / k! drive the summation kernel.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, field_validator, model_validator

from src.config import settings
from src.errors import (
    DomainError,
    NonPositiveLastImaginary,
    OddParameterCount,
    TooManyParameters,
)

ComplexLike = Union[complex, float, int]


def to_complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class DomainCheck:
    """
    Outcome of validate_domain.

    Attributes:
        ok: True when the parameters lie in the convergence domain
        error: The failing condition (a DomainError instance) otherwise
    """
    ok: bool
    error: Optional[DomainError] = None

    @classmethod
    def passed(cls) -> "DomainCheck":
        return cls(ok=True)

    @classmethod
    def failed(cls, error: DomainError) -> "DomainCheck":
        return cls(ok=False, error=error)

    def raise_for_error(self) -> None:
        if self.error is not None:
            raise self.error


def validate_domain(params: Union["ParameterVector", Sequence[ComplexLike]]) -> DomainCheck:
    """
    Check the convergence domain: N even and imag(tau_N) > 0.

    Accepts a raw sequence so callers can test candidate vectors before
    constructing a ParameterVector (which refuses invalid data).
    """
    taus = params.taus if isinstance(params, ParameterVector) else tuple(to_complex(t) for t in params)
    n = len(taus)
    if n == 0 or n % 2:
        return DomainCheck.failed(OddParameterCount(f"N={n} must be a positive even integer"))
    if n > settings.max_parameters:
        return DomainCheck.failed(
            TooManyParameters(f"N={n} exceeds the limit of {settings.max_parameters}")
        )
    if not taus[-1].imag > 0:
        return DomainCheck.failed(
            NonPositiveLastImaginary(f"imag(tau_{n})={taus[-1].imag!r} must be > 0")
        )
    return DomainCheck.passed()


class ParameterVector(BaseModel):
    """Ordered complex parameters (tau_1, ..., tau_N) inside the convergence domain."""
    taus: Tuple[complex, ...]

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("taus", mode="before")
    @classmethod
    def _coerce(cls, value):
        return tuple(to_complex(t) for t in value)

    @model_validator(mode="after")
    def _check_domain(self) -> "ParameterVector":
        validate_domain(self.taus).raise_for_error()
        return self

    @classmethod
    def of(cls, *taus: ComplexLike) -> "ParameterVector":
        return cls(taus=taus)

    @property
    def N(self) -> int:
        return len(self.taus)

    def __len__(self) -> int:
        return len(self.taus)

    def __getitem__(self, index: int) -> complex:
        return self.taus[index]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.taus, dtype=complex)

    def replace(self, taus: Sequence[ComplexLike]) -> "ParameterVector":
        return ParameterVector(taus=tuple(taus))

    def negate_odd(self) -> "ParameterVector":
        """Flip the sign of tau_1, tau_3, ... (the n -> -n reindexing)."""
        return self.replace(-t if k % 2 == 0 else t for k, t in enumerate(self.taus))


class PhasePolynomial:
    """
    phi(a) = sum a^k/k! * tau_k with tau_1..tau_N as its coefficients.

    The coefficients are arbitrary complex numbers: the group law evaluates
    phi(a; b) with a translation vector b in place of parameters.
    """

    def __init__(self, taus: Union[ParameterVector, Sequence[ComplexLike]]):
        if isinstance(taus, ParameterVector):
            taus = taus.taus
        self.taus: Tuple[complex, ...] = tuple(to_complex(t) for t in taus)
        if len(self.taus) > settings.max_parameters:
            raise TooManyParameters(f"N={len(self.taus)} exceeds {settings.max_parameters}")

    @property
    def N(self) -> int:
        return len(self.taus)

    def __call__(self, a: ComplexLike) -> complex:
        return self.derivative(0, a)

    def derivative(self, m: int, a: ComplexLike) -> complex:
        """m-th a-derivative, by Horner on tau_{m+j}/j!; tau_0 = 0."""
        if m < 0:
            raise ValueError(f"derivative order must be >= 0, got {m}")
        n = self.N
        if m > n:
            return 0j
        if m == n:
            return self.taus[-1]
        a = complex(a)
        acc = self.taus[-1]
        # sum_{j=0}^{N-m} a^j/j! tau_{m+j}
        for j in range(n - m - 1, -1, -1):
            tau = self.taus[m + j - 1] if m + j > 0 else 0j
            acc = tau + a * acc / (j + 1)
        return acc

    def coefficients(self) -> np.ndarray:
        """tau_k / k! for k = 1..N."""
        return np.array(
            [t / math.factorial(k) for k, t in enumerate(self.taus, start=1)], dtype=complex
        )

    def as_polynomial(self) -> Polynomial:
        """numpy Polynomial in a; coefficient 0 is phi(0) = 0."""
        return Polynomial(np.concatenate(([0j], self.coefficients())))

    def taylor_at(self, a: ComplexLike) -> np.ndarray:
        """Coefficients of phi(m + a) as a polynomial in m: phi^(k)(a) / k!."""
        return np.array(
            [self.derivative(k, a) / math.factorial(k) for k in range(self.N + 1)], dtype=complex
        )


def phase_eval(a: ComplexLike, phi: PhasePolynomial) -> complex:
    """phi(a); exactly 0 at a = 0."""
    return phi(a)


def phase_derivative(m: int, a: ComplexLike, phi: PhasePolynomial) -> complex:
    """m-th derivative of phi at a; 0 for m > N, tau_N for m = N."""
    return phi.derivative(m, a)


def shifted_params(a: ComplexLike, params: ParameterVector) -> ParameterVector:
    """(phi'(a), phi''(a), ..., phi^(N)(a)); the last entry stays tau_N."""
    phi = PhasePolynomial(params)
    return params.replace(phi.derivative(m, a) for m in range(1, params.N + 1))


class MultiIndex(BaseModel):
    """Differentiation orders (alpha_1, ..., alpha_N) with respect to tau_1..tau_N."""
    orders: Tuple[int, ...]

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("orders")
    @classmethod
    def _non_negative(cls, value):
        if any(o < 0 for o in value):
            raise ValueError(f"orders must be >= 0, got {value}")
        return value

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls(orders=(0,) * n)

    @classmethod
    def from_pairs(cls, n: int, *indices: int) -> "MultiIndex":
        """Build from 1-based parameter indices, e.g. (2, 1, 1) is d^3/dtau_2 dtau_1^2."""
        orders = [0] * n
        for k in indices:
            if not 1 <= k <= n:
                raise ValueError(f"index {k} outside 1..{n}")
            orders[k - 1] += 1
        return cls(orders=tuple(orders))

    @property
    def total_order(self) -> int:
        return sum(self.orders)

    @property
    def degree(self) -> int:
        """Power of n in the termwise prefactor: sum k * alpha_k."""
        return sum(k * o for k, o in enumerate(self.orders, start=1))

    def prefactor_constant(self) -> complex:
        """(2 pi i)^|alpha| / prod (k!)^alpha_k."""
        denom = 1
        for k, o in enumerate(self.orders, start=1):
            denom *= math.factorial(k) ** o
        return (2j * math.pi) ** self.total_order / denom

    def is_zero(self) -> bool:
        return self.total_order == 0
