"""
Numerical residuals of the catalog equations and finite-difference oracles
for the termwise derivatives they are built from.
"""
import itertools
import math
from typing import Dict, List, NamedTuple, Optional, Tuple

import mpmath

from src.config import settings
from src.core.oracle import mp_theta_sum
from src.core.params import MultiIndex, ParameterVector
from src.core.series import resolve_tol, theta_derivative, theta_eval, truncation_bound
from src.errors import DimensionMismatch
from src.pde.catalog import PdeSpec

# central stencils: derivative order -> {offset: weight}, to be divided by step^order
_STENCILS: Dict[int, Dict[int, float]] = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}

# extra terms kept on each side of the certified range by the precise stencil
_PRECISE_PADDING = 4


class PdeResidual(NamedTuple):
    residual: complex
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.residual) / self.scale if self.scale > 0 else abs(self.residual)


def pde_residual(spec: PdeSpec, params: ParameterVector, tol: Optional[float] = None) -> PdeResidual:
    """
    residual = sum coeff * Theta_alpha; scale = sum |coeff| * |Theta_alpha|.

    The contract is |residual| <= settings.residual_constant * tol * scale.

    Raises:
        DimensionMismatch: if the spec was built for a different N
    """
    if spec.N != params.N:
        raise DimensionMismatch(f"{spec.name} is built for N={spec.N}, parameters have N={params.N}")
    residual = 0j
    scale = 0.0
    for term in spec.terms:
        coefficient = term.value
        derivative = theta_derivative(term.alpha, params, tol).value
        residual += coefficient * derivative
        scale += abs(coefficient) * abs(derivative)
    return PdeResidual(residual, scale)


def residual_within_contract(result: PdeResidual, tol: Optional[float] = None) -> bool:
    return abs(result.residual) <= settings.residual_constant * resolve_tol(tol) * result.scale


def default_step(alpha: MultiIndex) -> float:
    """fd_step_low for total order <= 2, fd_step_high above."""
    return settings.fd_step_low if alpha.total_order <= 2 else settings.fd_step_high


def _stencil(alpha: MultiIndex) -> List[Tuple[Tuple[int, ...], float]]:
    """Tensor product of the per-index stencils: (offset vector, weight)."""
    for order in alpha.orders:
        if order not in _STENCILS:
            raise ValueError(f"derivative order {order} in one index is not supported (max 4)")
    per_index = [list(_STENCILS[order].items()) for order in alpha.orders]
    points = []
    for combo in itertools.product(*per_index):
        offsets = tuple(o for o, _ in combo)
        weight = 1.0
        for _, w in combo:
            weight *= w
        points.append((offsets, weight))
    return points


def _stencil_params(params: ParameterVector, offsets: Tuple[int, ...], step: float) -> ParameterVector:
    return params.replace(t + o * step for t, o in zip(params.taus, offsets))


def finite_difference(
    alpha: MultiIndex,
    params: ParameterVector,
    step: Optional[float] = None,
    tol: Optional[float] = None,
    precise: bool = False,
) -> complex:
    """
    Composed central differences of Theta, O(step^2) per differentiated index.

    With precise=True the stencil points, the sums and the weighted
    combination are all carried in mpmath at settings.oracle_dps digits over
    a padded certified range, so cancellation at small steps costs nothing.

    Raises:
        DimensionMismatch: if alpha and params disagree on N
    """
    if len(alpha.orders) != params.N:
        raise DimensionMismatch(f"multi-index has {len(alpha.orders)} entries, parameters have {params.N}")
    if alpha.total_order > 4:
        raise ValueError(f"total order {alpha.total_order} exceeds 4")
    step = default_step(alpha) if step is None else step
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    points = _stencil(alpha)

    if precise:
        return _precise_difference(alpha, params, step, tol, points)

    total = 0j
    for offsets, weight in points:
        total += weight * theta_eval(_stencil_params(params, offsets, step), tol).value
    return total / step ** alpha.total_order


def _precise_difference(alpha, params, step, tol, points) -> complex:
    reach = 2 * max(abs(o) for offsets, _ in points for o in offsets)
    bound = truncation_bound(params, min(resolve_tol(tol), 1e-16))
    n_range = (bound.n_min - _PRECISE_PADDING - reach, bound.n_max + _PRECISE_PADDING + reach)
    with mpmath.workdps(settings.oracle_dps):
        h = mpmath.mpf(step)
        base = [mpmath.mpc(t.real, t.imag) for t in params.taus]
        total = mpmath.mpc(0)
        for offsets, weight in points:
            taus = [t + o * h for t, o in zip(base, offsets)]
            total += mpmath.mpf(weight) * mp_theta_sum(taus, n_range)
        return complex(total / h ** alpha.total_order)


def richardson_difference(
    alpha: MultiIndex,
    params: ParameterVector,
    step: Optional[float] = None,
    tol: Optional[float] = None,
) -> complex:
    """One Richardson level over steps h and h/2: (4 D(h/2) - D(h)) / 3."""
    step = default_step(alpha) if step is None else step
    coarse = finite_difference(alpha, params, step, tol)
    fine = finite_difference(alpha, params, step / 2, tol)
    return (4 * fine - coarse) / 3


class HeatFlow(NamedTuple):
    time_derivative: complex
    expected: complex

    @property
    def relative_error(self) -> float:
        return abs(self.time_derivative - self.expected) / max(abs(self.expected), 1e-300)


def heat_time_derivative(params: ParameterVector, tol: Optional[float] = None) -> HeatFlow:
    """
    d Theta / d(imag tau_2) = i Theta_{tau_2} by holomorphy, against
    (1/(4 pi)) Theta_{tau_1 tau_1}, the value the heat equation forces.
    """
    n = params.N
    along_time = 1j * theta_derivative(MultiIndex.from_pairs(n, 2), params, tol).value
    forced = theta_derivative(MultiIndex.from_pairs(n, 1, 1), params, tol).value / (4 * math.pi)
    return HeatFlow(along_time, forced)
