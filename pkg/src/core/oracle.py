"""
Extended-precision direct summation, the independent reference for the
certified kernel. Not a user-facing evaluator: it sums a fixed range with no
truncation certificate at all.
"""
from typing import Optional, Sequence, Tuple

import mpmath

from src.config import settings
from src.core.params import ComplexLike, MultiIndex, ParameterVector


def mp_theta_sum(
    taus: Sequence,
    n_range: Tuple[int, int],
    offset=0,
    alpha: Optional[MultiIndex] = None,
):
    """
    The direct sum on mpmath numbers at the caller's working precision.

    Callers that perturb parameters below double resolution (finite
    differences) build taus in mpmath themselves and call this inside
    mpmath.workdps.
    """
    two_pi_i = 2 * mpmath.pi * mpmath.j
    coeffs = [mpmath.mpmathify(tau) / mpmath.factorial(k) for k, tau in enumerate(taus, start=1)]
    a = mpmath.mpmathify(offset)
    prefactor = mpmath.mpf(1)
    degree = 0
    if alpha is not None:
        for k, order in enumerate(alpha.orders, start=1):
            prefactor *= (two_pi_i / mpmath.factorial(k)) ** order
        degree = alpha.degree

    total = mpmath.mpc(0)
    lo, hi = n_range
    for m in range(lo, hi + 1):
        x = m + a
        phase = mpmath.fsum(c * x ** k for k, c in enumerate(coeffs, start=1))
        term = mpmath.exp(two_pi_i * phase)
        if degree:
            term *= prefactor * x ** degree
        total += term
    return total


def oracle_sum(
    params: ParameterVector,
    n_range: Tuple[int, int],
    offset: ComplexLike = 0,
    alpha: Optional[MultiIndex] = None,
    dps: Optional[int] = None,
) -> complex:
    """
    Sum prefactor(x) * exp(2 pi i phi(x)) for x = m + offset, m in n_range,
    in mpmath at `dps` decimal digits, rounded to a Python complex at the end.
    """
    with mpmath.workdps(dps or settings.oracle_dps):
        taus = [mpmath.mpc(t.real, t.imag) for t in params.taus]
        a = mpmath.mpc(complex(offset).real, complex(offset).imag)
        return complex(mp_theta_sum(taus, n_range, a, alpha))
