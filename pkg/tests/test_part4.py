"""
Part 4 Tests: PDE Verification

Tests for:
1. The catalog and its exact symbolic annihilation (sympy)
2. Numerical residuals and the sign-flipped negative control
3. Finite-difference oracles for the termwise derivatives
4. Heat flow along imag(tau_2)
"""
import numpy as np
import pytest
import sympy
from pydantic import ValidationError

from src.core import MultiIndex, ParameterVector, theta_derivative, theta_eval
from src.errors import DimensionMismatch
from src.pde import (
    PDE_NAMES,
    PdeTerm,
    build_pde,
    builtin_pdes,
    default_step,
    finite_difference,
    flip_sign,
    heat_time_derivative,
    is_annihilating,
    pde_residual,
    prefactor_polynomial,
    residual_within_contract,
    richardson_difference,
)

POINT_4 = ParameterVector.of(0.3 + 0.1j, 1j, 0.2, 2j)
POINT_2 = ParameterVector.of(0.15 - 0.05j, 0.8j)


def relative(actual: complex, expected: complex) -> float:
    return abs(actual - expected) / abs(expected)


# ============================================================================
# CATALOG
# ============================================================================

class TestCatalog:
    """Built-in equations and their symbolic check"""

    def test_names(self):
        assert set(PDE_NAMES) == {"heat", "tau-heat", "delta-mixed", "eta-mixed", "quartic", "rho-cubic"}

    def test_builtin_counts(self):
        assert len(builtin_pdes(4)) == 6
        assert [s.name for s in builtin_pdes(2)] == ["heat", "quartic"]

    def test_builtin_rejects_odd(self):
        with pytest.raises(ValueError):
            builtin_pdes(3)

    def test_build_needs_enough_parameters(self):
        with pytest.raises(DimensionMismatch):
            build_pde("tau-heat", 2)
        with pytest.raises(KeyError):
            build_pde("wave", 4)

    def test_spec_shape(self):
        spec = build_pde("eta-mixed", 4)
        assert spec.N == 4
        assert spec.max_order == 2
        assert spec.terms[2].alpha.orders == (1, 0, 1, 0)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_every_spec_annihilates(self, n):
        for spec in builtin_pdes(n):
            assert is_annihilating(spec), spec.name

    def test_heat_prefactor(self):
        n = sympy.Symbol("n")
        heat = build_pde("heat", 2)
        assert prefactor_polynomial(heat).is_zero
        # the time term alone is -pi n^2
        single = heat.model_copy(update={"terms": heat.terms[:1]})
        assert sympy.simplify(prefactor_polynomial(single).as_expr() + sympy.pi * n ** 2) == 0

    @pytest.mark.parametrize("name", ["heat", "quartic", "rho-cubic", "eta-mixed"])
    def test_flipped_spec_does_not_annihilate(self, name):
        flipped = flip_sign(build_pde(name, 4), 0)
        assert flipped.name == f"{name}~flip0"
        assert not is_annihilating(flipped)

    def test_flip_index_range(self):
        with pytest.raises(IndexError):
            flip_sign(build_pde("heat", 2), 2)

    def test_bad_coefficient(self):
        with pytest.raises(ValidationError):
            PdeTerm(coefficient="1/(", alpha=MultiIndex.zero(2))

    def test_coefficient_value(self):
        term = build_pde("heat", 2).terms[1]
        assert term.value == pytest.approx(-1 / (4 * np.pi))


# ============================================================================
# RESIDUALS
# ============================================================================

class TestResidual:
    """Numerical residuals of the catalog at in-domain points"""

    @pytest.mark.parametrize("name", PDE_NAMES)
    def test_residual_small(self, name):
        result = pde_residual(build_pde(name, 4), POINT_4)
        assert result.relative < 1e-9
        assert residual_within_contract(result)

    @pytest.mark.parametrize("name", PDE_NAMES)
    def test_negative_control(self, name):
        result = pde_residual(flip_sign(build_pde(name, 4), 0), POINT_4)
        assert result.relative > 0.1

    def test_two_parameter_heat(self):
        assert pde_residual(build_pde("heat", 2), POINT_2).relative < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pde_residual(build_pde("heat", 4), POINT_2)


# ============================================================================
# FINITE DIFFERENCES
# ============================================================================

class TestFiniteDifference:
    """Derivative oracles"""

    def test_default_step(self):
        assert default_step(MultiIndex.from_pairs(4, 1, 1)) == 1e-5
        assert default_step(MultiIndex.from_pairs(4, 2, 1, 1)) == 1e-4

    def test_zero_order_is_theta(self):
        alpha = MultiIndex.zero(2)
        assert finite_difference(alpha, POINT_2) == theta_derivative(alpha, POINT_2).value

    @pytest.mark.parametrize("indices", [(1,), (2,), (1, 1)])
    def test_double_precision_low_order(self, indices):
        alpha = MultiIndex.from_pairs(2, *indices)
        exact = theta_derivative(alpha, POINT_2).value
        assert relative(finite_difference(alpha, POINT_2), exact) < 1e-5

    def test_richardson_improves_first_order(self):
        alpha = MultiIndex.from_pairs(2, 2)
        exact = theta_derivative(alpha, POINT_2).value
        plain = relative(finite_difference(alpha, POINT_2, step=1e-3), exact)
        extrapolated = relative(richardson_difference(alpha, POINT_2, step=1e-3), exact)
        assert extrapolated < plain

    @pytest.mark.parametrize("indices", [(4,), (2, 2), (2, 1, 1), (3, 1), (1, 1, 1, 1), (3,), (1, 1, 1)])
    def test_precise_catalog_derivatives(self, indices):
        alpha = MultiIndex.from_pairs(4, *indices)
        exact = theta_derivative(alpha, POINT_4).value
        assert relative(finite_difference(alpha, POINT_4, precise=True), exact) < 1e-5

    def test_order_limits(self):
        with pytest.raises(ValueError):
            finite_difference(MultiIndex(orders=(5, 0)), POINT_2)
        with pytest.raises(ValueError):
            finite_difference(MultiIndex.from_pairs(2, 1), POINT_2, step=0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            finite_difference(MultiIndex.from_pairs(4, 1), POINT_2)


class TestHeatFlow:
    """d Theta / d(imag tau_2) against Theta_{tau_1 tau_1} / (4 pi)"""

    @pytest.mark.parametrize("params", [POINT_2, POINT_4])
    def test_heat_flow(self, params):
        flow = heat_time_derivative(params)
        assert flow.relative_error < 1e-9

    def test_matches_finite_difference_in_time(self):
        """A real step in imag(tau_2) is a step i*h in tau_2."""
        h = 1e-5
        up = ParameterVector.of(POINT_2[0], POINT_2[1] + 1j * h)
        down = ParameterVector.of(POINT_2[0], POINT_2[1] - 1j * h)
        numeric = (theta_eval(up).value - theta_eval(down).value) / (2 * h)
        assert relative(numeric, heat_time_derivative(POINT_2).time_derivative) < 1e-6
