"""
Part 3 Tests: Characteristics and Projective Embedding

Tests for:
1. Characteristic validation and enumeration
2. Characteristic theta values, directly and through operators
3. The level-l family: lattice invariance, quasi-periodicity, group actions
4. Chain projection
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from pydantic import ValidationError

from src.characteristics import (
    Characteristic,
    FamilyAction,
    ProjectivePoint,
    chain_consistency,
    chain_embed_dimension,
    chain_phase_params,
    chain_project,
    characteristic_shift_element,
    embed,
    enumerate_chars,
    family_exponent,
    family_lattice_shift,
    family_quasi_period,
    family_size,
    family_values,
    gamma_l_action,
    gamma_l_element,
    group_action_on_family,
    linear_combination,
    projective_equal,
    scale_params,
    scale_translation,
    theta_char_eval,
    theta_char_via_operators,
    unit_lattice_shift,
)
from src.checks import random_params
from src.core import ParameterVector, shifted_params, theta_eval, theta_eval_offset
from src.errors import DegeneratePoint, DimensionMismatch, DimensionTooSmall
from src.heisenberg import apply_S, pure_S

PARAMS_2 = ParameterVector.of(0.13 + 0.04j, 0.9j)
PARAMS_4 = ParameterVector.of(0.11 + 0.02j, -0.07 + 0.01j, 0.05, 0.25j)
PARAMS_6 = ParameterVector.of(0.1, 0.2 + 0.05j, -0.3, 0.1j, 0.2, 1.2j)


# ============================================================================
# CHARACTERISTICS
# ============================================================================

class TestCharacteristic:
    """Validation, reduction and derived vectors"""

    def test_entries_reduced_mod_one(self):
        ch = Characteristic(a=Fraction(3, 2), b=[Fraction(5, 4)], level=4)
        assert ch.a == Fraction(1, 2)
        assert ch.b == (Fraction(1, 4),)

    def test_denominators_follow_level(self):
        # b_1 lives in (1/l^(N-1))Z, a in (1/l)Z
        Characteristic(a=Fraction(1, 2), b=[Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)], level=2)
        with pytest.raises(ValidationError):
            Characteristic(a=Fraction(1, 4), b=[0, 0, 0], level=2)
        with pytest.raises(ValidationError):
            Characteristic(a=0, b=[0, Fraction(1, 8), 0], level=2)

    def test_level_positive(self):
        with pytest.raises(ValidationError):
            Characteristic(a=0, b=[0], level=0)

    def test_shift_vectors(self):
        ch = Characteristic(a=0, b=[Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)], level=2)
        assert ch.N == 4
        assert ch.shifts() == (0.125, 0.25, 0.5, 0)
        assert ch.scaled() == (0.125, 0.5, 3.0, 0)

    def test_str(self):
        ch = Characteristic(a=Fraction(1, 3), b=[Fraction(2, 3)], level=3)
        assert str(ch) == "[1/3; 2/3]"


class TestEnumeration:
    """enumerate_chars and the family size l^(1 + N(N-1)/2)"""

    def test_level_two_four_parameters(self):
        chars = enumerate_chars(2, 4)
        assert len(chars) == 128
        assert len({(c.a, c.b) for c in chars}) == 128

    def test_level_three_two_parameters(self):
        chars = enumerate_chars(3, 2)
        assert len(chars) == 9
        assert len(set((c.a, c.b) for c in chars)) == 9

    def test_a_varies_fastest(self):
        chars = enumerate_chars(2, 2)
        assert [(c.a, c.b[0]) for c in chars] == [
            (0, 0), (Fraction(1, 2), 0), (0, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))
        ]

    def test_level_one_is_single_character(self):
        assert len(enumerate_chars(1, 6)) == 1

    @given(level=st.integers(1, 3), n=st.sampled_from([2, 4]))
    @hsettings(max_examples=20, deadline=None)
    def test_cardinality(self, level, n):
        chars = enumerate_chars(level, n)
        assert len(chars) == family_size(level, n) == level ** family_exponent(n)
        assert len({(c.a, c.b) for c in chars}) == len(chars)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            enumerate_chars(0, 2)
        with pytest.raises(ValueError):
            enumerate_chars(2, 3)


class TestCharacteristicTheta:
    """Theta[a; b] values"""

    def test_zero_characteristic_is_theta(self):
        ch = Characteristic(a=0, b=[0, 0, 0], level=2)
        assert abs(theta_char_eval(ch, PARAMS_4).value - theta_eval(PARAMS_4).value) <= 1e-15

    def test_pure_offset(self):
        ch = Characteristic(a=Fraction(1, 2), b=[0], level=2)
        assert abs(theta_char_eval(ch, PARAMS_2).value - theta_eval_offset(PARAMS_2, 0.5).value) <= 1e-15

    @pytest.mark.parametrize("level", [2, 3])
    def test_operator_assembly_agrees(self, level):
        for ch in enumerate_chars(level, 2):
            direct = theta_char_eval(ch, PARAMS_2, 1e-14).value
            composed = theta_char_via_operators(ch, PARAMS_2, 1e-14)
            assert abs(composed - direct) <= 1e-11 * abs(direct)

    def test_dimension_mismatch(self):
        ch = Characteristic(a=0, b=[0], level=2)
        with pytest.raises(DimensionMismatch):
            theta_char_eval(ch, PARAMS_4)


# ============================================================================
# EMBEDDING
# ============================================================================

class TestProjective:
    """ProjectivePoint and projective equality"""

    def test_degenerate_point(self):
        with pytest.raises(DegeneratePoint):
            ProjectivePoint(coords=[0, 0])
        with pytest.raises(DegeneratePoint):
            ProjectivePoint(coords=[])

    def test_projective_equal(self):
        x = ProjectivePoint(coords=[1, 2j, -0.5])
        match = projective_equal(x, x.scaled_by(3 - 1j), 1e-12)
        assert match.equal
        assert match.scalar == pytest.approx(3 - 1j)

    def test_projective_unequal(self):
        x = ProjectivePoint(coords=[1, 2, 3])
        assert not projective_equal(x, ProjectivePoint(coords=[1, 2, 4]), 1e-12).equal

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            projective_equal(ProjectivePoint(coords=[1, 2]), ProjectivePoint(coords=[1]))


class TestEmbedding:
    """The level-l family evaluated at scaled parameters"""

    def test_scale_params(self):
        sigma = scale_params(PARAMS_4, 2)
        assert sigma.taus == (8 * PARAMS_4[0], 4 * PARAMS_4[1], 2 * PARAMS_4[2], PARAMS_4[3])

    def test_scale_translation(self):
        assert scale_translation((1, 1, 1, 1), 3) == (27, 9, 3, 1)

    def test_embed_counts(self):
        assert len(embed(PARAMS_2, 2)) == 4
        assert len(embed(PARAMS_2, 3)) == 9

    def test_first_coordinate_is_theta_at_scaled_params(self):
        point = embed(PARAMS_2, 2)
        assert abs(point.coords[0] - theta_eval(scale_params(PARAMS_2, 2)).value) <= 1e-15

    def test_family_lattice_invariance(self):
        shift = family_lattice_shift(2, 2)
        assert shift == (2, 8)
        base = embed(PARAMS_2, 2).as_array()
        moved = embed(apply_S(shift, PARAMS_2), 2).as_array()
        assert np.max(np.abs(moved - base)) <= 1e-9 * np.max(np.abs(base))

    def test_unit_lattice_is_identity_with_phases(self):
        assert unit_lattice_shift(2, 4) == (2, 4, 12, 48)
        shift = scale_translation(unit_lattice_shift(2, 2), 2)
        report = group_action_on_family(pure_S(shift), PARAMS_2, 2, 1e-14)
        assert report.passed
        assert report.is_identity

    def test_quasi_period_level_two(self):
        qp = family_quasi_period(PARAMS_2, 2)
        assert qp.sigma_shift == 2
        assert qp.new_params == shifted_params(1, PARAMS_2)
        match = projective_equal(embed(PARAMS_2, 2, 1e-14), embed(qp.new_params, 2, 1e-14), 1e-8)
        assert match.equal
        assert abs(match.scalar - qp.scalar) <= 1e-8 * abs(qp.scalar)

    def test_gamma_element_in_sigma_coordinates(self):
        g = gamma_l_element(1, (1, 1, 1), 2)
        assert g.a == 2
        assert g.b == (8, 8, 12, 0)

    def test_gamma_action_on_tau(self):
        moved = gamma_l_action(1, (1, 0, 0), PARAMS_4, 2)
        expected = apply_S((1, 0, 0, 0), shifted_params(1, PARAMS_4))
        assert moved == expected
        with pytest.raises(DimensionMismatch):
            gamma_l_action(1, (1, 0), PARAMS_4, 2)

    def test_gamma_translation_permutes_family(self):
        report = group_action_on_family(gamma_l_element(1, (0,), 2), PARAMS_2, 2, 1e-14)
        assert report.passed
        assert report.is_bijective
        assert all(abs(abs(p) - 1) <= 1e-8 for p in report.phases)

    @pytest.mark.parametrize("a, b", [(0, (0, 0, 1)), (1, (1, 1, 1))])
    def test_four_parameter_action_is_a_permutation(self, a, b):
        """Members that coincide as functions are each matched once."""
        params = random_params(np.random.default_rng(5), 4, last_imag=(0.2, 0.3), other_imag=0.05)
        report = group_action_on_family(gamma_l_element(a, b, 2), params, 2, 1e-14)
        assert report.is_bijective
        assert sorted(report.permutation) == list(range(family_size(2, 4)))
        assert report.passed

    def test_repeated_target_does_not_pass(self):
        report = FamilyAction(
            permutation=(0, 0), phases=(1 + 0j, 1 + 0j), residual=0.0, unit_error=0.0, threshold=1e-8
        )
        assert not report.is_bijective
        assert not report.passed

    def test_characteristic_shift_swaps_b(self):
        delta = Characteristic(a=0, b=[Fraction(1, 2)], level=2)
        report = group_action_on_family(characteristic_shift_element(delta), PARAMS_2, 2, 1e-14)
        assert report.passed
        assert report.permutation == (2, 3, 0, 1)
        assert report.phases[3] == pytest.approx(-1, abs=1e-8)
        assert report.phases[0] == pytest.approx(1, abs=1e-8)

    def test_action_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            group_action_on_family(gamma_l_element(1, (0, 0, 0), 2), PARAMS_2, 2)

    def test_linear_combination_recovers_member(self):
        chars = enumerate_chars(2, 2)
        rows = []
        for shift in (0, 0.03, 0.07, 0.11, 0.19):
            sigma = apply_S((shift, 0), scale_params(PARAMS_2, 2))
            rows.append(family_values(sigma, chars))
        family = np.array(rows)
        fit = linear_combination(2 * family[:, 1], family)
        assert fit.residual <= 1e-10
        assert fit.coefficients[1] == pytest.approx(2, abs=1e-6)

    def test_level_two_four_parameter_family(self):
        point = embed(PARAMS_4, 2, 1e-14)
        assert len(point) == 128
        moved = embed(apply_S(family_lattice_shift(2, 4), PARAMS_4), 2, 1e-14)
        assert np.max(np.abs(moved.as_array() - point.as_array())) <= 1e-9 * np.max(np.abs(point.as_array()))


# ============================================================================
# CHAIN PROJECTION
# ============================================================================

class TestChain:
    """Dropping tau_1 and tau_2"""

    def test_project(self):
        assert chain_project(PARAMS_6).taus == PARAMS_6.taus[2:]

    def test_phase_bookkeeping(self):
        assert np.allclose(chain_phase_params(PARAMS_6).as_array(), chain_project(PARAMS_6).as_array(), rtol=1e-15)

    def test_consistency(self):
        projected, differentiated = chain_consistency(PARAMS_6)
        assert abs(projected - differentiated) <= 1e-13 * abs(projected)

    def test_too_small(self):
        with pytest.raises(DimensionTooSmall):
            chain_project(PARAMS_2)
        with pytest.raises(DimensionTooSmall):
            chain_embed_dimension(2, 2)

    def test_embed_dimension(self):
        assert chain_embed_dimension(2, 6) == 128
        assert chain_embed_dimension(3, 4) == 9
