"""Core series: parameters, phase polynomial and the certified theta kernel."""
from .params import (
    DomainCheck,
    MultiIndex,
    ParameterVector,
    PhasePolynomial,
    phase_derivative,
    phase_eval,
    shifted_params,
    validate_domain,
)
from .series import (
    EvalResult,
    TruncationBound,
    theta_derivative,
    theta_eval,
    theta_eval_many,
    theta_eval_offset,
    theta_family_sum,
    truncation_bound,
)
from .oracle import mp_theta_sum, oracle_sum

__all__ = [
    "DomainCheck",
    "MultiIndex",
    "ParameterVector",
    "PhasePolynomial",
    "phase_derivative",
    "phase_eval",
    "shifted_params",
    "validate_domain",
    "EvalResult",
    "TruncationBound",
    "theta_derivative",
    "theta_eval",
    "theta_eval_many",
    "theta_eval_offset",
    "theta_family_sum",
    "truncation_bound",
    "mp_theta_sum",
    "oracle_sum",
]
