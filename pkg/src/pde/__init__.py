"""
Linear differential equations of the theta function.

Components:
- catalog: PdeSpec, the built-in equations and their symbolic check
- residual: numeric residuals, finite-difference and Richardson oracles
"""
from .catalog import (
    PDE_NAMES,
    PdeSpec,
    PdeTerm,
    build_pde,
    builtin_pdes,
    flip_sign,
    is_annihilating,
    prefactor_polynomial,
)
from .residual import (
    HeatFlow,
    PdeResidual,
    default_step,
    finite_difference,
    heat_time_derivative,
    pde_residual,
    residual_within_contract,
    richardson_difference,
)

__all__ = [
    "PDE_NAMES",
    "PdeSpec",
    "PdeTerm",
    "build_pde",
    "builtin_pdes",
    "flip_sign",
    "is_annihilating",
    "prefactor_polynomial",
    "HeatFlow",
    "PdeResidual",
    "default_step",
    "finite_difference",
    "heat_time_derivative",
    "pde_residual",
    "residual_within_contract",
    "richardson_difference",
]
