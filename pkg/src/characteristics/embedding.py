"""
Projective embedding by the level-l family of characteristic theta functions.

The family is evaluated at the scaled parameters

    sigma = (l^(N-1) tau_1, l^(N-2) tau_2, ..., l tau_{N-1}, tau_N)

with each characteristic entering through its factorial-scaled shifts
(a; 1! b_1, 2! b_2, ...). Group elements acting on the family are written
in sigma coordinates: the subgroup element built from integers (a; b) is
(1, l a, l^(N-1) b_1, 2! l^(N-2) b_2, ...), which on tau is the integer
element (a; 1! b_1, 2! b_2, ...).
"""
import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, field_validator, model_validator
from scipy.optimize import linear_sum_assignment

from src.characteristics.characteristic import (
    Characteristic,
    enumerate_chars,
    family_exponent,
    theta_with_shifts,
)
from src.config import settings
from src.core.params import ComplexLike, ParameterVector, PhasePolynomial, shifted_params, to_complex
from src.core.series import resolve_tol, theta_eval
from src.errors import DegeneratePoint, DimensionMismatch, DimensionTooSmall
from src.heisenberg.group import GroupElement, pure_S
from src.heisenberg.operators import apply_S, apply_T, scaled_tol

# sigma_1 and sigma_2 offsets for the extra sample points of the action detector
_SAMPLE_OFFSETS = (0.0371 + 0.0123j, 0.0219 + 0.0157j)

# cosines this close to a column's best count as the same match
_COSINE_TIE = 1e-10


def scale_params(params: ParameterVector, level: int) -> ParameterVector:
    """(l^(N-1) tau_1, ..., l tau_{N-1}, tau_N)."""
    n = params.N
    return params.replace(level ** (n - k) * t for k, t in enumerate(params.taus, start=1))


def scale_translation(b: Sequence[ComplexLike], level: int) -> Tuple[complex, ...]:
    """A tau translation expressed in sigma coordinates."""
    n = len(b)
    return tuple(level ** (n - k) * to_complex(v) for k, v in enumerate(b, start=1))


class ProjectivePoint(BaseModel):
    """Homogeneous coordinates; at least one above settings.projective_floor."""
    coords: Tuple[complex, ...]

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("coords", mode="before")
    @classmethod
    def _coerce(cls, value):
        return tuple(to_complex(c) for c in value)

    @model_validator(mode="after")
    def _not_degenerate(self) -> "ProjectivePoint":
        if not self.coords or max(abs(c) for c in self.coords) <= settings.projective_floor:
            raise DegeneratePoint(f"all {len(self.coords)} coordinates are below {settings.projective_floor}")
        return self

    def __len__(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=complex)

    def scaled_by(self, scalar: ComplexLike) -> "ProjectivePoint":
        return ProjectivePoint(coords=tuple(complex(scalar) * c for c in self.coords))


def family_values(
    sigma: ParameterVector,
    chars: Sequence[Characteristic],
    tol: Optional[float] = None,
) -> np.ndarray:
    """Every family member at already-scaled parameters, in the order of chars."""
    tol = resolve_tol(tol)

    def one(ch: Characteristic) -> complex:
        return theta_with_shifts(ch.a, ch.scaled(), sigma, tol).value

    if settings.family_workers > 1:
        with ThreadPoolExecutor(max_workers=settings.family_workers) as pool:
            values = list(pool.map(one, chars))
    else:
        values = [one(ch) for ch in chars]
    return np.asarray(values, dtype=complex)


def embed(params: ParameterVector, level: int, tol: Optional[float] = None) -> ProjectivePoint:
    """
    {Theta_i(l^(N-1) tau_1, ..., tau_N)} over enumerate_chars(l, N).

    Raises:
        DegeneratePoint: if every coordinate is below the floor
    """
    chars = enumerate_chars(level, params.N)
    values = family_values(scale_params(params, level), chars, tol)
    return ProjectivePoint(coords=tuple(complex(v) for v in values))


class ProjectiveMatch(NamedTuple):
    equal: bool
    scalar: complex
    residual: float


def projective_equal(x: ProjectivePoint, y: ProjectivePoint, tol: Optional[float] = None) -> ProjectiveMatch:
    """
    y == scalar * x with the scalar read off the largest coordinate of x.

    Raises:
        DimensionMismatch: if the points have different lengths
    """
    if len(x) != len(y):
        raise DimensionMismatch(f"points have {len(x)} and {len(y)} coordinates")
    tol = resolve_tol(tol)
    xs, ys = x.as_array(), y.as_array()
    j = int(np.argmax(np.abs(xs)))
    scalar = complex(ys[j] / xs[j])
    residual = float(np.max(np.abs(ys - scalar * xs)) / np.max(np.abs(ys)))
    return ProjectiveMatch(residual <= tol, scalar, residual)


def unit_lattice_shift(level: int, n_params: int) -> Tuple[int, ...]:
    """(1! l, 2! l, ..., N! l) on tau."""
    return tuple(math.factorial(k) * level for k in range(1, n_params + 1))


def family_lattice_shift(level: int, n_params: int) -> Tuple[int, ...]:
    """(1! l, 2! l^2, ..., N! l^N) on tau: leaves every coordinate unchanged."""
    return tuple(math.factorial(k) * level ** k for k in range(1, n_params + 1))


class QuasiPeriod(NamedTuple):
    new_params: ParameterVector
    scalar: complex
    sigma_shift: int


def family_quasi_period(params: ParameterVector, level: int, sigma_shift: Optional[int] = None) -> QuasiPeriod:
    """
    T by sigma_shift on the scaled parameters (default l^(N-1), which is l for
    N = 2) and the scalar exp(-2 pi i phi(sigma_shift)) it should multiply the
    whole family by.

    On tau this is T by sigma_shift / l.
    """
    c = level ** (params.N - 1) if sigma_shift is None else sigma_shift
    sigma = scale_params(params, level)
    scalar = cmath.exp(-2j * math.pi * PhasePolynomial(sigma)(c))
    return QuasiPeriod(shifted_params(c / level, params), scalar, c)


def gamma_l_element(a: int, b: Sequence[int], level: int) -> GroupElement:
    """(1, l a, l^(N-1) b_1, 2! l^(N-2) b_2, ..., (N-1)! l b_{N-1}, 0) from integers."""
    n = len(b) + 1
    entries = tuple(math.factorial(k) * level ** (n - k) * int(bk) for k, bk in enumerate(b, start=1))
    return GroupElement(a=level * int(a), b=entries + (0,))


def gamma_l_action(a: int, b: Sequence[int], params: ParameterVector, level: int) -> ParameterVector:
    """Unscaled parameters reached by the subgroup element: E(a) tau + (1! b_1, ..., (N-1)! b_{N-1}, 0)."""
    if len(b) != params.N - 1:
        raise DimensionMismatch(f"expected {params.N - 1} integers b, got {len(b)}")
    moved = shifted_params(int(a), params)
    return apply_S(tuple(math.factorial(k) * int(bk) for k, bk in enumerate(b, start=1)) + (0,), moved)


def characteristic_shift_element(delta: Characteristic) -> GroupElement:
    """The sigma translation that moves characteristic b to b + delta.b."""
    return pure_S(delta.scaled())


class FamilyAction(BaseModel):
    """Transformed coordinate i = phases[i] * original coordinate permutation[i]."""
    permutation: Tuple[int, ...]
    phases: Tuple[complex, ...]
    residual: float
    unit_error: float
    threshold: float

    model_config = {"frozen": True, "extra": "forbid"}

    @property
    def passed(self) -> bool:
        return self.is_bijective and self.residual <= self.threshold and self.unit_error <= self.threshold

    @property
    def is_bijective(self) -> bool:
        return len(set(self.permutation)) == len(self.permutation)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.permutation))


def _sample_points(sigma: ParameterVector) -> List[ParameterVector]:
    d1, d2 = _SAMPLE_OFFSETS
    zeros = [0j] * sigma.N
    first, second = list(zeros), list(zeros)
    first[0] = d1
    second[1] = d2
    return [sigma, apply_S(first, sigma), apply_S(second, sigma)]


def _transform(g: GroupElement, sigma: ParameterVector) -> Tuple[complex, ParameterVector]:
    """(normalising factor, E(a) sigma + b) for the group element in sigma coordinates."""
    multiplier, moved = apply_T(g.a, sigma)
    return g.lambda_value / multiplier, apply_S(g.b, moved)


def group_action_on_family(
    g: GroupElement,
    params: ParameterVector,
    level: int,
    tol: Optional[float] = None,
    threshold: float = 1e-8,
) -> FamilyAction:
    """
    Evaluate the family at the g-transformed scaled parameters, divide out
    the T multiplier, and match every transformed coordinate against the
    originals as functions (three sample points) up to a unit phase.

    Family members can coincide as functions, so matching is an assignment:
    near-tied cosines are equal, the coordinate's own index wins among them,
    and every original is used once.
    """
    if g.N != params.N:
        raise DimensionMismatch(f"element has N={g.N}, parameters have N={params.N}")
    tol = resolve_tol(tol)
    chars = enumerate_chars(level, params.N)
    original, transformed = [], []
    for sigma in _sample_points(scale_params(params, level)):
        original.append(family_values(sigma, chars, tol))
        factor, moved = _transform(g, sigma)
        transformed.append(factor * family_values(moved, chars, scaled_tol(tol, 1 / factor)))
    x = np.array(original)  # samples x coordinates
    y = np.array(transformed)

    x_norm = np.linalg.norm(x, axis=0)
    y_norm = np.linalg.norm(y, axis=0)
    gram = x.conj().T @ y  # gram[j, i] = <x_j, y_i>
    cosine = np.abs(gram) / np.maximum(np.outer(x_norm, y_norm), np.finfo(float).tiny)
    best = _assignment(cosine)

    permutation, phases = [], []
    residual, unit_error = 0.0, 0.0
    for i, j in enumerate(best):
        scalar = gram[j, i] / max(x_norm[j] ** 2, np.finfo(float).tiny)
        miss = np.linalg.norm(y[:, i] - scalar * x[:, j]) / max(y_norm[i], np.finfo(float).tiny)
        residual = max(residual, float(miss))
        unit_error = max(unit_error, abs(abs(scalar) - 1.0))
        permutation.append(int(j))
        phases.append(complex(scalar))
    return FamilyAction(
        permutation=tuple(permutation),
        phases=tuple(phases),
        residual=residual,
        unit_error=unit_error,
        threshold=threshold,
    )


def _assignment(cosine: np.ndarray) -> np.ndarray:
    """best[i] = original matched to transformed coordinate i, one-to-one."""
    top = cosine.max(axis=0)
    score = np.where(cosine >= top - _COSINE_TIE, top, cosine)
    score[np.diag_indices_from(score)] += _COSINE_TIE
    rows, cols = linear_sum_assignment(score, maximize=True)
    best = np.empty(len(cols), dtype=int)
    best[cols] = rows
    return best


class LinearFit(NamedTuple):
    coefficients: np.ndarray
    residual: float
    rank: int


def linear_combination(target: Sequence[complex], family: np.ndarray) -> LinearFit:
    """
    Least-squares coefficients c with family @ c ~ target; rows are sample
    points, columns family members. Diagnostic only: nothing certifies it.
    """
    family = np.asarray(family, dtype=complex)
    target = np.asarray(target, dtype=complex)
    coefficients, _, rank, _ = np.linalg.lstsq(family, target, rcond=None)
    miss = np.linalg.norm(family @ coefficients - target) / max(np.linalg.norm(target), np.finfo(float).tiny)
    return LinearFit(coefficients, float(miss), int(rank))


def chain_project(params: ParameterVector) -> ParameterVector:
    """
    Drop tau_1 and tau_2.

    Raises:
        DimensionTooSmall: for N = 2
    """
    if params.N < 4:
        raise DimensionTooSmall(f"chain projection needs N >= 4, got N={params.N}")
    return params.replace(params.taus[2:])


def chain_phase_params(params: ParameterVector) -> ParameterVector:
    """
    Parameters of phi''(n) - phi''(0), read off the differentiated numpy polynomial.

    Coefficient k of the result is k! times the n^k coefficient, which is the
    bookkeeping chain_project does by index shift.
    """
    if params.N < 4:
        raise DimensionTooSmall(f"chain projection needs N >= 4, got N={params.N}")
    second = PhasePolynomial(params).as_polynomial().deriv(2)
    coef = second.coef
    return params.replace(coef[k] * math.factorial(k) for k in range(1, params.N - 1))


def chain_consistency(params: ParameterVector, tol: Optional[float] = None) -> Tuple[complex, complex]:
    """(Theta(chain_project(params)), Theta of the twice-differentiated phase)."""
    projected = theta_eval(chain_project(params), tol).value
    differentiated = theta_eval(chain_phase_params(params), tol).value
    return projected, differentiated


def chain_embed_dimension(level: int, n_params: int) -> int:
    """Coordinates of the embedding after one chain projection: l^p(N-2)."""
    if n_params < 4:
        raise DimensionTooSmall(f"chain projection needs N >= 4, got N={n_params}")
    return level ** family_exponent(n_params - 2)
