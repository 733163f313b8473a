"""
Characteristic theta functions and the level-l projective embedding.

Components:
- characteristic: Characteristic, enumeration and evaluation
- embedding: scaled family, projective comparison, group actions, chain projection
"""
from .characteristic import (
    Characteristic,
    enumerate_chars,
    family_exponent,
    family_size,
    theta_char_eval,
    theta_char_via_operators,
    theta_with_shifts,
)
from .embedding import (
    FamilyAction,
    LinearFit,
    ProjectiveMatch,
    ProjectivePoint,
    QuasiPeriod,
    chain_consistency,
    chain_embed_dimension,
    chain_phase_params,
    chain_project,
    characteristic_shift_element,
    embed,
    family_lattice_shift,
    family_quasi_period,
    family_values,
    gamma_l_action,
    gamma_l_element,
    group_action_on_family,
    linear_combination,
    projective_equal,
    scale_params,
    scale_translation,
    unit_lattice_shift,
)

__all__ = [
    "Characteristic",
    "enumerate_chars",
    "family_exponent",
    "family_size",
    "theta_char_eval",
    "theta_char_via_operators",
    "theta_with_shifts",
    "FamilyAction",
    "LinearFit",
    "ProjectiveMatch",
    "ProjectivePoint",
    "QuasiPeriod",
    "chain_consistency",
    "chain_embed_dimension",
    "chain_phase_params",
    "chain_project",
    "characteristic_shift_element",
    "embed",
    "family_lattice_shift",
    "family_quasi_period",
    "family_values",
    "gamma_l_action",
    "gamma_l_element",
    "group_action_on_family",
    "linear_combination",
    "projective_equal",
    "scale_params",
    "scale_translation",
    "unit_lattice_shift",
]
