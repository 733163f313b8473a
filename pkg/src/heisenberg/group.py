"""
Extended Heisenberg group elements (lambda, a, b_1, ..., b_N).

lambda is stored through its phase t, lambda = exp(2 pi i t). For real data t
is real and lambda has unit modulus; complex a and b make the cocycle
phi(a; b') complex, so t is kept as a complex number with its real part
reduced mod 1.

Group law (the product of the parameter-space matrices of representation.py):

    (t, a, b) (t', a', b') = (t + t' - phi(a; b'),  a + a',  b + E(a) b')

E(a) is the unipotent block with entries a^(j-i)/(j-i)!. For pure translations
(a = 0) and for translations of tau_1 alone E(a) b' = b', which recovers the
classical law lambda lambda' exp(-2 pi i a b').
"""
import cmath
import math
from typing import Sequence, Tuple

from pydantic import BaseModel, field_validator

from src.core.params import ComplexLike, PhasePolynomial, to_complex
from src.errors import DimensionMismatch
from src.heisenberg.operators import rotate_translation


def _reduce(t: complex) -> complex:
    return complex(t.real % 1.0, t.imag)


def phase_distance(t1: complex, t2: complex) -> float:
    """Distance between two phases, real parts compared mod 1."""
    d = (t1.real - t2.real) % 1.0
    return math.hypot(min(d, 1.0 - d), t1.imag - t2.imag)


class GroupElement(BaseModel):
    """(lambda, a, b) with lambda = exp(2 pi i * phase)."""
    phase: complex = 0j
    a: complex = 0j
    b: Tuple[complex, ...]

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("phase", mode="before")
    @classmethod
    def _reduce_phase(cls, value):
        return _reduce(to_complex(value))

    @field_validator("a", mode="before")
    @classmethod
    def _coerce_a(cls, value):
        return to_complex(value)

    @field_validator("b", mode="before")
    @classmethod
    def _coerce_b(cls, value):
        return tuple(to_complex(v) for v in value)

    @classmethod
    def from_lambda(cls, lam: ComplexLike, a: ComplexLike, b: Sequence[ComplexLike]) -> "GroupElement":
        lam = complex(lam)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        return cls(phase=cmath.log(lam) / (2j * math.pi), a=a, b=b)

    @property
    def N(self) -> int:
        return len(self.b)

    @property
    def lambda_value(self) -> complex:
        return cmath.exp(2j * math.pi * self.phase)

    @property
    def lambda_phase(self) -> float:
        """Real phase in [0, 1); meaningful when is_unit_modulus."""
        return self.phase.real

    @property
    def is_unit_modulus(self) -> bool:
        return self.phase.imag == 0


def identity_element(n: int) -> GroupElement:
    return GroupElement(b=(0j,) * n)


def pure_T(a: ComplexLike, n: int) -> GroupElement:
    return GroupElement(a=a, b=(0j,) * n)


def pure_S(b: Sequence[ComplexLike]) -> GroupElement:
    return GroupElement(b=b)


def group_multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """
    Raises:
        DimensionMismatch: if the elements carry different N
    """
    if g1.N != g2.N:
        raise DimensionMismatch(f"cannot multiply elements with N={g1.N} and N={g2.N}")
    rotated = rotate_translation(g1.a, g2.b)
    return GroupElement(
        phase=g1.phase + g2.phase - PhasePolynomial(g2.b)(g1.a),
        a=g1.a + g2.a,
        b=tuple(x + y for x, y in zip(g1.b, rotated)),
    )


def group_inverse(g: GroupElement) -> GroupElement:
    """Two-sided inverse: a -> -a, b -> -E(-a) b, phase solved from the law."""
    b_inv = tuple(-x for x in rotate_translation(-g.a, g.b))
    return GroupElement(
        phase=-g.phase + PhasePolynomial(b_inv)(g.a),
        a=-g.a,
        b=b_inv,
    )
