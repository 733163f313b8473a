"""
Quasi-periodicity operator T_a, translations S(b) and their commutation phase.

T_a moves the parameters to (phi'(a), ..., phi^(N)(a)) and carries the
multiplier exp(-2 pi i phi(a)):

    Theta(shifted_params(a, tau)) = exp(-2 pi i phi(a)) * Theta_a(tau)

S(b) adds b entrywise. Moving a translation through T_a rotates it by the
inner block E(a) of the parameter representation and produces the phase
exp(-2 pi i phi(a; b)).
"""
import cmath
import math
from enum import Enum
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from src.core.params import (
    ComplexLike,
    ParameterVector,
    PhasePolynomial,
    shifted_params,
    validate_domain,
)
from src.core.series import resolve_tol, theta_eval
from src.errors import DimensionMismatch


class PhaseConvention(str, Enum):
    """Sign pattern of the commutation cocycle."""
    PHI = "phi"  # a b_1 + a^2/2! b_2 + a^3/3! b_3 + ...
    ALTERNATING = "alternating"  # a b_1 - a^2/2! b_2 - a^3/3! b_3 - ... (negative control only)


class TAction(NamedTuple):
    multiplier: complex
    new_params: ParameterVector


def apply_T(a: ComplexLike, params: ParameterVector) -> TAction:
    """(exp(-2 pi i phi(a)), shifted_params(a, params))."""
    phi = PhasePolynomial(params)
    return TAction(cmath.exp(-2j * math.pi * phi(a)), shifted_params(a, params))


def compose_T(a1: ComplexLike, a2: ComplexLike, params: ParameterVector) -> TAction:
    """T_{a1} followed by T_{a2}; the multipliers multiply."""
    first = apply_T(a1, params)
    second = apply_T(a2, first.new_params)
    return TAction(first.multiplier * second.multiplier, second.new_params)


def apply_S(b: Sequence[ComplexLike], params: ParameterVector) -> ParameterVector:
    """
    Entrywise translation tau_k + b_k.

    Raises:
        DimensionMismatch: if len(b) != N
        DomainError: if the translated vector leaves the convergence domain
    """
    if len(b) != params.N:
        raise DimensionMismatch(f"translation has {len(b)} entries, parameters have {params.N}")
    shifted = [t + complex(s) for t, s in zip(params.taus, b)]
    validate_domain(shifted).raise_for_error()
    return params.replace(shifted)


def scaled_tol(tol: float, multiplier: complex) -> float:
    """Absolute tolerance for Theta at T-shifted parameters, whose size is |multiplier| * |Theta_a|."""
    return tol * min(1.0, abs(multiplier))


def lattice_shift(b: Sequence[int], n: int = None) -> Tuple[int, ...]:
    """(1! b_1, 2! b_2, ..., N! b_N): a translation Theta is invariant under."""
    if n is not None and len(b) != n:
        raise DimensionMismatch(f"expected {n} integers, got {len(b)}")
    return tuple(math.factorial(k) * int(v) for k, v in enumerate(b, start=1))


def cocycle(a: ComplexLike, b: Sequence[ComplexLike], convention: PhaseConvention = PhaseConvention.PHI) -> complex:
    """phi(a; b), or its alternating-sign misreading."""
    if convention == PhaseConvention.PHI:
        return PhasePolynomial(b)(a)
    a = complex(a)
    total = 0j
    for k, bk in enumerate(b, start=1):
        sign = 1 if k == 1 else -1
        total += sign * a ** k / math.factorial(k) * complex(bk)
    return total


def commutation_phase(
    a: ComplexLike,
    b: Sequence[ComplexLike],
    convention: PhaseConvention = PhaseConvention.PHI,
) -> complex:
    """exp(-2 pi i phi(a; b))."""
    return cmath.exp(-2j * math.pi * cocycle(a, b, convention))


def rotate_translation(a: ComplexLike, b: Sequence[ComplexLike]) -> Tuple[complex, ...]:
    """E(a) b: the translation seen after moving it through T_a."""
    return tuple(PhasePolynomial(b).derivative(m, a) for m in range(1, len(b) + 1))


class CommutationValues(NamedTuple):
    s_then_t: complex
    t_then_s: complex
    phase: complex

    @property
    def relative_error(self) -> float:
        expected = self.phase * self.s_then_t
        return abs(self.t_then_s - expected) / max(abs(expected), np.finfo(float).tiny)


def functional_commutation(
    a: int,
    b: Sequence[ComplexLike],
    params: ParameterVector,
    tol: float = None,
    convention: PhaseConvention = PhaseConvention.PHI,
) -> CommutationValues:
    """
    Evaluate Theta along both operator orderings for integer a.

    S then T: translate by b, apply T_a and divide out its multiplier.
    T then S: apply T_a, translate by E(a) b, divide out the T_a multiplier.
    The two differ by commutation_phase(a, b).
    """
    tol = resolve_tol(tol)
    mult_1, params_1 = apply_T(a, apply_S(b, params))
    s_then_t = theta_eval(params_1, scaled_tol(tol, mult_1)).value / mult_1

    mult_2, params_2 = apply_T(a, params)
    params_2 = apply_S(rotate_translation(a, b), params_2)
    t_then_s = theta_eval(params_2, scaled_tol(tol, mult_2)).value / mult_2

    return CommutationValues(s_then_t, t_then_s, commutation_phase(a, b, convention))
