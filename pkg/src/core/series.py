"""
Certified evaluation of the generalized theta series

    Theta(tau_1, ..., tau_N) = sum_{n in Z} exp(2 pi i phi(n))

and its offset and termwise-differentiated variants.

All public evaluators go through one kernel, theta_family_sum, which sums

    C * x^d * exp(2 pi i phi(x)),   x = m + offset,  m in Z

where C * x^d is the termwise derivative prefactor (C = 1, d = 0 for the
function itself). Terms are generated outward from m = 0 on each side until
the tail certificate holds, then accumulated in the fixed order
0, +1, -1, +2, -2, ... with compensated summation.

Tail certificate (per side): let L(m) be the log-magnitude of term m. Past
the outermost real root of d^2/dm^2 Im phi(m + offset) (and, for d > 0, past
|m + Re offset| >= |Im offset|) L is concave, so the successive term ratios
never increase again. Once the terms have decreased for `steps` consecutive
indices inside that region, the discarded tail is bounded by t * r / (1 - r)
with t the last included magnitude and r the largest ratio of the current
monotone run (at most `steps + 1` of them are remembered).

The reported tail_bound adds a rounding budget to that truncation tail: each
term carries eps * |term| * (8 + d + 2 pi (N + 2) P(|x|)) with P the phase
polynomial on |tau_k|, which covers the phase evaluation, exp, the prefactor
and the final rounding of the compensated sum. The truncation tail never
reports below the smallest normal double.
"""
import cmath
import math
from collections import deque
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, field_validator, model_validator

from src.config import settings
from src.core.params import ComplexLike, MultiIndex, ParameterVector, PhasePolynomial
from src.core.summation import CompensatedSum
from src.errors import ComplexOffsetDivergence, DimensionMismatch, RangeOverflow

# exp() overflows just above 709.78
_MAX_LOG_MAGNITUDE = 700.0
_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


class EvalResult(BaseModel):
    """A theta value with its certified error bound (truncation plus rounding) and the range summed."""
    value: complex
    tail_bound: float
    n_min: int
    n_max: int
    terms_summed: int

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("tail_bound")
    @classmethod
    def _non_negative(cls, value: float) -> float:
        if not value >= 0:
            raise ValueError(f"tail_bound must be >= 0, got {value}")
        return value

    @model_validator(mode="after")
    def _range_contains_zero(self) -> "EvalResult":
        if not self.n_min <= 0 <= self.n_max:
            raise ValueError(f"range [{self.n_min}, {self.n_max}] must contain 0")
        return self

    @property
    def n_range(self) -> Tuple[int, int]:
        return (self.n_min, self.n_max)


class TruncationBound(NamedTuple):
    n_min: int
    n_max: int
    certified_tail: float


class _Side(NamedTuple):
    terms: List[complex]
    tail: float
    rounding: float


def resolve_tol(tol: Optional[float]) -> float:
    tol = settings.default_tol if tol is None else float(tol)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return tol


def _is_integer(a: complex) -> bool:
    return a.imag == 0 and float(a.real).is_integer()


class _SeriesKernel:
    """One certified summation over x = m + offset."""

    def __init__(
        self,
        params: ParameterVector,
        offset: ComplexLike = 0,
        alpha: Optional[MultiIndex] = None,
    ):
        if alpha is not None and len(alpha.orders) != params.N:
            raise DimensionMismatch(
                f"multi-index has {len(alpha.orders)} entries, parameters have {params.N}"
            )
        self.params = params
        self.phi = PhasePolynomial(params)
        self.offset = complex(offset)
        self.degree = alpha.degree if alpha is not None else 0
        self.constant = alpha.prefactor_constant() if alpha is not None else 1 + 0j
        self.log_constant = math.log(abs(self.constant))
        self.steps = settings.monotone_steps or params.N
        self.cap = settings.max_terms_per_side
        # Im phi(m + offset) as a real polynomial in m
        self.im_phase = Polynomial(self.phi.taylor_at(self.offset).imag)
        # phase polynomial on |tau_k|: bounds every partial sum of the Horner scheme
        self.abs_phase = Polynomial(np.concatenate(([0.0], np.abs(self.phi.coefficients()))))
        self.phase_weight = 2 * math.pi * (params.N + 2)

    # -- terms ---------------------------------------------------------------

    def term(self, m: int) -> Tuple[complex, float]:
        """(value, log-magnitude) of the term at x = m + offset."""
        x = m + self.offset
        exponent = 2j * math.pi * self.phi(x)
        log_mag = exponent.real
        if self.degree:
            if x == 0:
                return 0j, -math.inf
            log_mag += self.log_constant + self.degree * math.log(abs(x))
        if log_mag > _MAX_LOG_MAGNITUDE:
            self._overflow(m, log_mag)
        value = cmath.exp(exponent)
        if self.degree:
            value *= self.constant * x ** self.degree
        return value, log_mag

    def rounding(self, m: int, log_mag: float) -> float:
        """Double-precision error budget of the term at m."""
        if log_mag == -math.inf:
            return 0.0
        x = abs(m + self.offset)
        weight = 8 + self.degree + self.phase_weight * self.abs_phase(x)
        return _EPS * math.exp(log_mag) * weight

    def _overflow(self, m: int, log_mag: float) -> None:
        msg = f"term magnitude exp({log_mag:.1f}) at m={m} is not representable in double precision"
        if self.offset.imag != 0:
            raise ComplexOffsetDivergence(msg)
        raise RangeOverflow(msg)

    # -- certificate ---------------------------------------------------------

    def concavity_thresholds(self) -> Tuple[float, float]:
        """(lower, upper): L(m) is concave for m >= upper and for m <= lower."""
        curvature = self.im_phase.deriv(2)
        roots = [r.real for r in np.atleast_1d(curvature.roots()) if abs(r.imag) < 1e-9 * (1 + abs(r))]
        upper = max(roots, default=-math.inf)
        lower = min(roots, default=math.inf)
        if self.degree:
            spread = abs(self.offset.imag)
            upper = max(upper, spread - self.offset.real)
            lower = min(lower, -spread - self.offset.real)
        return lower, upper

    def check_reach(self, tol: float) -> None:
        """Raise RangeOverflow when even |m| = cap cannot push terms below tol."""
        reach = float(self.cap)
        coeffs = self.im_phase.coef
        lead = coeffs[-1]
        lower_terms = sum(abs(c) * reach ** k for k, c in enumerate(coeffs[:-1]))
        decay = 2 * math.pi * (lead * reach ** len(coeffs[:-1]) - lower_terms)
        if self.degree:
            decay -= self.log_constant + self.degree * math.log(reach + abs(self.offset))
        if decay < math.log(2.0 / tol) + 1.0:
            raise RangeOverflow(
                f"tolerance {tol:g} needs more than {self.cap} terms per side "
                f"(imag(tau_N)={self.params.taus[-1].imag:g})"
            )

    def scan(self, direction: int, log_start: float, threshold: float, tol: float) -> _Side:
        """Walk outward from m = 0 until the tail on this side is certified below tol / 2."""
        terms: List[complex] = []
        rounding = 0.0
        ratios: deque = deque(maxlen=self.steps + 1)
        previous = log_start
        streak = 0
        m = 0
        while True:
            m += direction
            if abs(m) > self.cap:
                raise RangeOverflow(
                    f"no certified tail within {self.cap} terms (direction {direction:+d})"
                )
            value, log_mag = self.term(m)
            terms.append(value)
            rounding += self.rounding(m, log_mag)
            # an exact zero of the prefactor never counts as decay
            if -math.inf < log_mag < previous:
                streak += 1
                ratios.append(log_mag - previous)
            else:
                streak = 0
                ratios.clear()
            previous = log_mag
            concave = direction * (m - direction) >= direction * threshold
            if concave and streak >= self.steps:
                worst = max(ratios)
                # log of t * r / (1 - r), kept in logs so an underflowed t still bounds the tail
                log_tail = log_mag + worst - math.log1p(-math.exp(worst))
                tail = max(math.exp(log_tail), _TINY)
                if tail <= tol / 2:
                    return _Side(terms, tail, rounding)

    def run(self, tol: float) -> Tuple[EvalResult, TruncationBound]:
        self.check_reach(tol)
        lower, upper = self.concavity_thresholds()
        center, log_center = self.term(0)
        plus = self.scan(+1, log_center, upper, tol)
        minus = self.scan(-1, log_center, lower, tol)

        acc = CompensatedSum()
        acc.add(center)
        for k in range(max(len(plus.terms), len(minus.terms))):
            if k < len(plus.terms):
                acc.add(plus.terms[k])
            if k < len(minus.terms):
                acc.add(minus.terms[k])

        tail = plus.tail + minus.tail
        rounding = self.rounding(0, log_center) + plus.rounding + minus.rounding
        bound = TruncationBound(-len(minus.terms), len(plus.terms), tail)
        result = EvalResult(
            value=acc.value,
            tail_bound=tail + rounding,
            n_min=bound.n_min,
            n_max=bound.n_max,
            terms_summed=acc.count,
        )
        return result, bound



def truncation_bound(
    params: ParameterVector,
    tol: Optional[float] = None,
    offset: ComplexLike = 0,
    alpha: Optional[MultiIndex] = None,
) -> TruncationBound:
    """
    Certified summation range for the given tolerance.

    Returns:
        (n_min, n_max, certified_tail) with certified_tail <= tol

    Raises:
        RangeOverflow: if the range would exceed settings.max_terms_per_side
    """
    _, bound = _SeriesKernel(params, offset, alpha).run(resolve_tol(tol))
    return bound


def theta_family_sum(
    params: ParameterVector,
    offset: ComplexLike = 0,
    alpha: Optional[MultiIndex] = None,
    tol: Optional[float] = None,
) -> EvalResult:
    """Sum prefactor(x) * exp(2 pi i phi(x)) over x in Z + offset."""
    result, _ = _SeriesKernel(params, offset, alpha).run(resolve_tol(tol))
    return result


def theta_eval(params: ParameterVector, tol: Optional[float] = None) -> EvalResult:
    """
    Theta(tau_1, ..., tau_N) with |value - exact| <= tail_bound.

    The truncation part of tail_bound stays within tol; the rounding part can
    exceed a tol set below double-precision resolution of the sum.
    """
    return theta_family_sum(params, tol=tol)


def theta_eval_offset(params: ParameterVector, offset: ComplexLike, tol: Optional[float] = None) -> EvalResult:
    """
    Theta_a: the series summed over n in Z + a.

    Integer offsets give the same term set as theta_eval and return its result.

    Raises:
        ComplexOffsetDivergence: if a non-real offset drives terms out of range
    """
    a = complex(offset)
    if _is_integer(a):
        return theta_eval(params, tol)
    return theta_family_sum(params, offset=a, tol=tol)


def theta_derivative(alpha: MultiIndex, params: ParameterVector, tol: Optional[float] = None) -> EvalResult:
    """Termwise derivative: each d/dtau_k inserts 2 pi i n^k / k!."""
    if len(alpha.orders) != params.N:
        raise DimensionMismatch(f"multi-index has {len(alpha.orders)} entries, parameters have {params.N}")
    if alpha.is_zero():
        return theta_eval(params, tol)
    return theta_family_sum(params, alpha=alpha, tol=tol)


def theta_eval_many(params_list: Sequence[ParameterVector], tol: Optional[float] = None) -> List[EvalResult]:
    return [theta_eval(p, tol) for p in params_list]
