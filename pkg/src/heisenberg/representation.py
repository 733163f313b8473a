"""
Finite (N+2) x (N+2) parameter-space representation of the group.

    [ 1  r(a)  -t ]        r(a) = (a, a^2/2!, ..., a^N/N!)
    [ 0  E(a)   b ]        E(a)_ij = a^(j-i)/(j-i)!  (j >= i)
    [ 0   0     1 ]

acting on the augmented column (input_phase, tau_1, ..., tau_N, 1). The
corner holds -ln(lambda)/(2 pi i) = -t. Applied to a pure T_a element the
middle rows return shifted_params(a, tau) and the top row adds phi(a).
"""
import math
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, field_validator

from src.core.params import ComplexLike, ParameterVector
from src.errors import DimensionMismatch
from src.heisenberg.group import GroupElement


class RepMatrix(BaseModel):
    """Upper unitriangular representation matrix."""
    entries: np.ndarray

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @field_validator("entries")
    @classmethod
    def _unitriangular(cls, value: np.ndarray) -> np.ndarray:
        value = np.array(value, dtype=complex)
        if value.ndim != 2 or value.shape[0] != value.shape[1] or value.shape[0] < 4:
            raise ValueError(f"expected a square matrix of size >= 4, got shape {value.shape}")
        if np.any(np.tril(value, -1) != 0):
            raise ValueError("entries below the diagonal must be exactly 0")
        if np.any(np.diag(value) != 1):
            raise ValueError("diagonal entries must be exactly 1")
        value.setflags(write=False)
        return value

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.size - 2

    @property
    def a(self) -> complex:
        return complex(self.entries[0, 1])

    def inner_block(self) -> np.ndarray:
        return self.entries[1:-1, 1:-1]

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.size != other.size:
            raise DimensionMismatch(f"sizes {self.size} and {other.size} differ")
        product = self.entries @ other.entries
        # restore exact structure lost to rounding of zero products
        product = np.triu(product)
        np.fill_diagonal(product, 1)
        return RepMatrix(entries=product)


def shift_block(a: ComplexLike, size: int) -> np.ndarray:
    """size x size upper-triangular block with entries a^(j-i)/(j-i)!."""
    a = complex(a)
    powers = [a ** k / math.factorial(k) for k in range(size)]
    block = np.zeros((size, size), dtype=complex)
    for i in range(size):
        block[i, i:] = powers[: size - i]
    return block


def matrix_rep(g: GroupElement) -> RepMatrix:
    """(N+2) x (N+2) matrix of g; the top-left (N+1) block is shift_block(a)."""
    n = g.N
    m = np.zeros((n + 2, n + 2), dtype=complex)
    m[: n + 1, : n + 1] = shift_block(g.a, n + 1)
    m[1 : n + 1, n + 1] = g.b
    m[0, n + 1] = -g.phase
    m[n + 1, n + 1] = 1
    return RepMatrix(entries=m)


class MatrixAction(NamedTuple):
    output_phase: complex
    new_params: ParameterVector


def matrix_apply(m: RepMatrix, params: ParameterVector, input_phase: ComplexLike = 0) -> MatrixAction:
    """
    Apply m to (input_phase, tau_1, ..., tau_N, 1).

    input_phase plays the role of -ln(lambda_2)/(2 pi i); the returned phase
    is -ln(lambda_1 lambda_2)/(2 pi i) + phi(a).

    Raises:
        DimensionMismatch: if m is not (N+2) x (N+2)
        DomainError: if the transformed parameters leave the domain
    """
    if m.size != params.N + 2:
        raise DimensionMismatch(f"matrix of size {m.size} cannot act on N={params.N}")
    column = np.concatenate(([complex(input_phase)], params.as_array(), [1.0 + 0j]))
    out = m.entries @ column
    return MatrixAction(complex(out[0]), params.replace(out[1:-1]))
