"""
Extended Heisenberg group acting on theta parameters.

Components:
- operators: T_a, S(b), commutation phase and the functional two-ordering check
- group: GroupElement and its law, inverse and powers
- representation: (N+2) x (N+2) parameter-space matrices
"""
from .operators import (
    CommutationValues,
    PhaseConvention,
    TAction,
    apply_S,
    apply_T,
    cocycle,
    commutation_phase,
    compose_T,
    functional_commutation,
    lattice_shift,
    rotate_translation,
    scaled_tol,
)
from .group import (
    GroupElement,
    group_inverse,
    group_multiply,
    identity_element,
    phase_distance,
    pure_S,
    pure_T,
)
from .representation import MatrixAction, RepMatrix, matrix_apply, matrix_rep, shift_block

__all__ = [
    "CommutationValues",
    "PhaseConvention",
    "TAction",
    "apply_S",
    "apply_T",
    "cocycle",
    "commutation_phase",
    "compose_T",
    "functional_commutation",
    "lattice_shift",
    "rotate_translation",
    "scaled_tol",
    "GroupElement",
    "group_inverse",
    "group_multiply",
    "identity_element",
    "phase_distance",
    "pure_S",
    "pure_T",
    "MatrixAction",
    "RepMatrix",
    "matrix_apply",
    "matrix_rep",
    "shift_block",
]
