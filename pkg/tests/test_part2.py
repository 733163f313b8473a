"""
Part 2 Tests: Extended Heisenberg Group

Tests for:
1. T_a and S(b) on parameters and on theta values
2. The commutation phase and its negative control
3. Group law, inverse and powers
4. The (N+2) x (N+2) matrix representation
"""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from pydantic import ValidationError

from src.core import ParameterVector, PhasePolynomial, shifted_params, theta_eval, theta_eval_offset
from src.errors import DimensionMismatch, NonPositiveLastImaginary
from src.heisenberg import (
    GroupElement,
    PhaseConvention,
    RepMatrix,
    apply_S,
    apply_T,
    cocycle,
    commutation_phase,
    compose_T,
    functional_commutation,
    group_inverse,
    group_multiply,
    identity_element,
    lattice_shift,
    matrix_apply,
    matrix_rep,
    phase_distance,
    pure_S,
    pure_T,
    rotate_translation,
    scaled_tol,
    shift_block,
)

PARAMS = ParameterVector.of(0.3 + 0.05j, -0.2, 0.1 - 0.02j, 1.1j)


def relative(actual: complex, expected: complex) -> float:
    return abs(actual - expected) / abs(expected)


real = st.floats(-1, 1, allow_nan=False)


def elements(n: int):
    return st.builds(
        lambda t, a, b: GroupElement(phase=t, a=a, b=b),
        st.floats(0, 1, exclude_max=True),
        real,
        st.lists(real, min_size=n, max_size=n),
    )


# ============================================================================
# OPERATORS
# ============================================================================

class TestOperators:
    """T_a, S(b) and the lattice subgroup"""

    def test_apply_T_returns_multiplier_and_params(self):
        action = apply_T(2, PARAMS)
        phi = PhasePolynomial(PARAMS)
        assert action.multiplier == pytest.approx(cmath.exp(-2j * math.pi * phi(2)))
        assert action.new_params == shifted_params(2, PARAMS)

    @pytest.mark.parametrize("a", [1, 2, 3])
    def test_quasi_periodicity_integer(self, a):
        multiplier, moved = apply_T(a, PARAMS)
        lhs = theta_eval(moved, scaled_tol(1e-13, multiplier)).value
        assert relative(lhs, multiplier * theta_eval(PARAMS, 1e-13).value) <= 1e-9

    def test_quasi_periodicity_fractional(self):
        multiplier, moved = apply_T(0.5, PARAMS)
        lhs = theta_eval(moved, 1e-13).value
        assert relative(lhs, multiplier * theta_eval_offset(PARAMS, 0.5, 1e-13).value) <= 1e-9

    def test_compose_T_is_T_of_sum(self):
        composed = compose_T(0.4, 0.9, PARAMS)
        direct = apply_T(1.3, PARAMS)
        assert composed.multiplier == pytest.approx(direct.multiplier, rel=1e-12)
        assert np.allclose(composed.new_params.as_array(), direct.new_params.as_array(), atol=1e-12)

    def test_apply_S_translates(self):
        moved = apply_S([1, 0, 0, 0.5j], PARAMS)
        assert moved[0] == PARAMS[0] + 1
        assert moved[-1] == PARAMS[-1] + 0.5j

    def test_apply_S_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_S([1, 0], PARAMS)

    def test_apply_S_leaving_domain(self):
        with pytest.raises(NonPositiveLastImaginary):
            apply_S([0, 0, 0, -2j], PARAMS)

    def test_lattice_shift(self):
        assert lattice_shift([1, 1, 1, 1]) == (1, 2, 6, 24)
        assert lattice_shift([2, -1]) == (2, -2)
        with pytest.raises(DimensionMismatch):
            lattice_shift([1, 2], 4)

    @pytest.mark.parametrize("b", [(1, 0, 0, 0), (0, 1, 0, 0), (1, -1, 2, 1), (-2, 2, -1, 0)])
    def test_lattice_invariance(self, b):
        moved = apply_S(lattice_shift(b), PARAMS)
        assert relative(theta_eval(moved).value, theta_eval(PARAMS).value) <= 1e-10

    def test_scaled_tol(self):
        assert scaled_tol(1e-12, 1e-3) == pytest.approx(1e-15)
        assert scaled_tol(1e-12, 5.0) == 1e-12

    def test_rotate_translation(self):
        assert rotate_translation(0, (1, 2, 3)) == (1, 2, 3)
        # E(a) b = (b_1 + a b_2, b_2) for N = 2
        assert rotate_translation(2, (1, 3)) == pytest.approx((7, 3))


class TestCommutation:
    """The phase picked up when S(b) moves through T_a"""

    def test_cocycle_is_phase_polynomial_of_b(self):
        b = (0.3, -0.2, 0.5, 0.1)
        assert cocycle(1.5, b) == pytest.approx(PhasePolynomial(b)(1.5))

    def test_alternating_flips_higher_terms(self):
        b = (0.3, 0.2)
        assert cocycle(1, b, PhaseConvention.ALTERNATING) == pytest.approx(0.3 - 0.1)

    def test_classical_phase(self):
        """N = 2 with b = (b_1, 0): exp(-2 pi i a b_1)."""
        assert commutation_phase(2, (0.125, 0)) == pytest.approx(cmath.exp(-2j * math.pi * 0.25))

    @pytest.mark.parametrize("a", [1, 2])
    @pytest.mark.parametrize("b", [(0.3, -0.1, 0.2, 0.05), (-0.4, 0.25, 0.0, -0.3)])
    def test_functional_two_orderings(self, a, b):
        values = functional_commutation(a, b, PARAMS)
        assert values.relative_error <= 1e-9

    def test_alternating_convention_fails(self):
        values = functional_commutation(1, (0.1, 0.25, 0, 0), PARAMS, convention=PhaseConvention.ALTERNATING)
        assert values.relative_error >= 0.1


# ============================================================================
# GROUP
# ============================================================================

class TestGroup:
    """Group law, identity, inverse and powers"""

    def test_phase_reduced_mod_one(self):
        g = GroupElement(phase=1.25, b=[0, 0])
        assert g.phase == 0.25

    def test_from_lambda(self):
        g = GroupElement.from_lambda(1j, 0.5, [0.1, 0.2])
        assert g.lambda_value == pytest.approx(1j)
        assert g.phase.real == pytest.approx(0.25)
        assert g.is_unit_modulus
        with pytest.raises(ValueError):
            GroupElement.from_lambda(0, 0, [0, 0])

    def test_classical_law(self):
        """(t, a, (b_1, 0)) (t', a', (b_1', 0)): the phase loses a b_1'."""
        g1 = GroupElement(phase=0.1, a=0.5, b=[0.2, 0])
        g2 = GroupElement(phase=0.3, a=0.25, b=[0.4, 0])
        product = group_multiply(g1, g2)
        assert phase_distance(product.phase, 0.1 + 0.3 - 0.5 * 0.4) <= 1e-15
        assert product.a == 0.75
        assert product.b == pytest.approx((0.6, 0))

    def test_identity(self):
        g = GroupElement(phase=0.4, a=0.7, b=[0.1, -0.2, 0.3, 0.5])
        e = identity_element(4)
        for product in (group_multiply(e, g), group_multiply(g, e)):
            assert phase_distance(product.phase, g.phase) <= 1e-15
            assert product.b == pytest.approx(g.b)

    @given(g=elements(4))
    @hsettings(max_examples=50, deadline=None)
    def test_inverse_is_two_sided(self, g):
        for product in (group_multiply(g, group_inverse(g)), group_multiply(group_inverse(g), g)):
            assert phase_distance(product.phase, 0) <= 1e-12
            assert abs(product.a) <= 1e-12
            assert max(abs(x) for x in product.b) <= 1e-12

    @given(g1=elements(4), g2=elements(4), g3=elements(4))
    @hsettings(max_examples=100, deadline=None)
    def test_associativity(self, g1, g2, g3):
        left = group_multiply(group_multiply(g1, g2), g3)
        right = group_multiply(g1, group_multiply(g2, g3))
        assert phase_distance(left.phase, right.phase) <= 1e-10
        assert abs(left.a - right.a) <= 1e-12
        assert np.allclose(left.b, right.b, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            group_multiply(identity_element(2), identity_element(4))

    def test_pure_elements(self):
        assert pure_T(0.5, 2).b == (0, 0)
        assert pure_S([1, 2]).a == 0


# ============================================================================
# MATRIX REPRESENTATION
# ============================================================================

class TestRepresentation:
    """Parameter-space matrices"""

    def test_shift_block(self):
        block = shift_block(2, 3)
        assert np.allclose(block, [[1, 2, 2], [0, 1, 2], [0, 0, 1]])

    def test_rejects_non_unitriangular(self):
        with pytest.raises(ValidationError):
            RepMatrix(entries=np.eye(4) * 2)
        with pytest.raises(ValidationError):
            RepMatrix(entries=np.eye(3))

    def test_pure_T_matrices_compose(self):
        product = matrix_rep(pure_T(0.3 + 0.2j, 4)) @ matrix_rep(pure_T(-0.7, 4))
        direct = matrix_rep(pure_T(-0.4 + 0.2j, 4))
        assert np.max(np.abs(product.entries - direct.entries)) <= 1e-12

    @given(g1=elements(4), g2=elements(4))
    @hsettings(max_examples=50, deadline=None)
    def test_homomorphism(self, g1, g2):
        product = matrix_rep(g1) @ matrix_rep(g2)
        direct = matrix_rep(group_multiply(g1, g2))
        corner = (0, product.size - 1)
        # the corner holds -phase and is only defined mod 1
        assert phase_distance(-product.entries[corner], -direct.entries[corner]) <= 1e-12
        body = product.entries.copy()
        body[corner] = direct.entries[corner]
        assert np.allclose(body, direct.entries, atol=1e-12)

    def test_pure_T_action_is_shifted_params(self):
        a = 0.6 - 0.1j
        action = matrix_apply(matrix_rep(pure_T(a, 4)), PARAMS)
        assert np.allclose(action.new_params.as_array(), shifted_params(a, PARAMS).as_array(), atol=1e-12)
        assert action.output_phase == pytest.approx(PhasePolynomial(PARAMS)(a))

    def test_general_action(self):
        g = GroupElement(phase=0.25, a=1.0, b=[0.1, 0.2, 0.0, 0.3j])
        action = matrix_apply(matrix_rep(g), PARAMS, input_phase=0.5)
        expected = apply_S(g.b, shifted_params(g.a, PARAMS))
        assert np.allclose(action.new_params.as_array(), expected.as_array(), atol=1e-12)
        assert action.output_phase == pytest.approx(0.5 + PhasePolynomial(PARAMS)(1.0) - 0.25)

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            matrix_apply(matrix_rep(identity_element(2)), PARAMS)
