"""
Randomized identity suites.

Each suite draws its cases from a seeded numpy Generator, so a fixed seed
reproduces every parameter vector. run_suites drives any subset and records
the run in a trajectory.
"""
import zlib
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.characteristics import (
    Characteristic,
    chain_consistency,
    characteristic_shift_element,
    embed,
    enumerate_chars,
    family_lattice_shift,
    family_quasi_period,
    family_size,
    gamma_l_element,
    group_action_on_family,
    projective_equal,
    scale_translation,
    theta_char_eval,
    theta_char_via_operators,
    unit_lattice_shift,
)
from src.checks.base import CheckResult, Suite, relative_error
from src.checks.trajectory import Trajectory, TrajectoryLogger
from src.config import settings
from src.core import (
    MultiIndex,
    ParameterVector,
    oracle_sum,
    shifted_params,
    theta_derivative,
    theta_eval,
)
from src.heisenberg import (
    GroupElement,
    PhaseConvention,
    apply_S,
    apply_T,
    functional_commutation,
    group_multiply,
    lattice_shift,
    matrix_apply,
    matrix_rep,
    phase_distance,
    pure_S,
    pure_T,
    scaled_tol,
)
from src.pde import builtin_pdes, finite_difference, flip_sign, heat_time_derivative, pde_residual


def random_params(
    rng: np.random.Generator,
    n: int,
    last_imag: Tuple[float, float] = (0.5, 1.5),
    other_imag: float = 0.1,
) -> ParameterVector:
    """Real parts in [-0.5, 0.5), small imaginary parts, imag(tau_N) drawn from last_imag."""
    re = rng.uniform(-0.5, 0.5, size=n)
    im = rng.uniform(-other_imag, other_imag, size=n)
    im[-1] = rng.uniform(*last_imag)
    return ParameterVector(taus=tuple(complex(r, i) for r, i in zip(re, im)))


class QuasiPeriodSuite(Suite):
    """Theta(shifted_params(a)) = exp(-2 pi i phi(a)) Theta for integer a."""
    name = "quasiperiod"
    threshold = 1e-9

    def default_samples(self) -> int:
        return 100

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4, 6]))
            a = int(rng.integers(1, 4))
            params = random_params(rng, n)
            cases.append(lambda p=params, a=a: self._check(p, a))
        return cases

    def _check(self, params: ParameterVector, a: int) -> CheckResult:
        multiplier, moved = apply_T(a, params)
        lhs = theta_eval(moved, scaled_tol(settings.default_tol, multiplier)).value
        rhs = multiplier * theta_eval(params).value
        return CheckResult.judge("", relative_error(lhs, rhs), self.threshold, N=params.N, a=a)


class LatticeSuite(Suite):
    """Invariance under (1! b_1, ..., N! b_N) with integer b."""
    name = "lattice"
    threshold = 1e-10

    def default_samples(self) -> int:
        return 100

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4, 6]))
            b = [int(x) for x in rng.integers(-2, 3, size=n)]
            cases.append(lambda p=random_params(rng, n), b=b: self._check(p, b))
        return cases

    def _check(self, params, b):
        moved = apply_S(lattice_shift(b, params.N), params)
        err = relative_error(theta_eval(moved).value, theta_eval(params).value)
        return CheckResult.judge("", err, self.threshold, b=b)


class CommutationSuite(Suite):
    """
    S then T against T then S. With convention=ALTERNATING the suite is the
    negative control: every case must show a discrepancy of at least `floor`.
    """
    threshold = 1e-9
    floor = 0.1

    def __init__(self, convention: PhaseConvention = PhaseConvention.PHI):
        self.convention = convention

    @property
    def name(self) -> str:
        return "commutation" if self.convention == PhaseConvention.PHI else "commutation-alternating"

    def default_samples(self) -> int:
        return 50

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4])) if self.convention == PhaseConvention.PHI else 4
            a = int(rng.integers(1, 3))
            if self.convention == PhaseConvention.PHI:
                b = [float(x) for x in rng.uniform(-0.5, 0.5, size=n)]
            else:
                # a = 1 and b = (b_1, b_2, 0, 0) make the two conventions differ by exactly b_2
                a = 1
                b = [float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.1, 0.4)), 0.0, 0.0]
            cases.append(lambda p=random_params(rng, n), a=a, b=b: self._check(p, a, b))
        return cases

    def _check(self, params, a, b):
        values = functional_commutation(a, b, params, convention=self.convention)
        if self.convention == PhaseConvention.PHI:
            return CheckResult.judge("", values.relative_error, self.threshold, a=a, b=b)
        return CheckResult.expect_failure("", values.relative_error, self.floor, a=a, b=b)


class MatrixSuite(Suite):
    """A(a1) A(a2) = A(a1 + a2), and matrix_apply of pure T equals shifted_params."""
    name = "matrix"
    threshold = 1e-12

    def default_samples(self) -> int:
        return 50

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([4, 6]))
            a1, a2 = (complex(*rng.uniform(-1, 1, size=2)) for _ in range(2))
            cases.append(lambda p=random_params(rng, n), a1=a1, a2=a2: self._check(p, a1, a2))
        return cases

    def _check(self, params, a1, a2):
        n = params.N
        product = matrix_rep(pure_T(a1, n)) @ matrix_rep(pure_T(a2, n))
        direct = matrix_rep(pure_T(a1 + a2, n))
        err = float(np.max(np.abs(product.entries - direct.entries)))
        action = matrix_apply(matrix_rep(pure_T(a1, n)), params)
        expected = shifted_params(a1, params).as_array()
        err = max(err, float(np.max(np.abs(action.new_params.as_array() - expected))))
        return CheckResult.judge("", err, self.threshold, N=n)


class GroupSuite(Suite):
    """Associativity of the group law, phases compared mod 1."""
    name = "group"
    threshold = 1e-10

    def default_samples(self) -> int:
        return 100

    @staticmethod
    def _element(rng, n) -> GroupElement:
        return GroupElement(
            phase=float(rng.uniform(0, 1)),
            a=float(rng.uniform(-1, 1)),
            b=[float(x) for x in rng.uniform(-1, 1, size=n)],
        )

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4, 6]))
            triple = tuple(self._element(rng, n) for _ in range(3))
            cases.append(lambda t=triple: self._check(*t))
        return cases

    def _check(self, g1, g2, g3):
        left = group_multiply(group_multiply(g1, g2), g3)
        right = group_multiply(g1, group_multiply(g2, g3))
        err = max(
            phase_distance(left.phase, right.phase),
            abs(left.a - right.a),
            max(abs(x - y) for x, y in zip(left.b, right.b)),
        )
        return CheckResult.judge("", err, self.threshold, N=g1.N)


class CharacteristicCountSuite(Suite):
    """|enumerate_chars(l, N)| = l^(1 + N(N-1)/2), all distinct."""
    name = "characteristics"

    def cases(self, rng, samples):
        return [lambda l=l, n=n: self._check(l, n) for l, n in ((1, 4), (2, 2), (3, 2), (2, 4))]

    def _check(self, level, n):
        chars = enumerate_chars(level, n)
        expected = family_size(level, n)
        distinct = len({(c.a, c.b) for c in chars})
        miss = abs(len(chars) - expected) + abs(distinct - expected)
        return CheckResult.judge(f"characteristics[l={level},N={n}]", float(miss), 0.0, count=len(chars))


class CharacteristicOperatorSuite(Suite):
    """theta_char_eval against the S / T_a / multiplier composition."""
    name = "char-operators"
    tol = 1e-14
    threshold = 1e-11

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4]))
            level = int(rng.choice([2, 3]))
            a = Fraction(int(rng.integers(0, level)), level)
            b = [Fraction(int(rng.integers(0, level ** (n - k))), level ** (n - k)) for k in range(1, n)]
            ch = Characteristic(a=a, b=b, level=level)
            cases.append(lambda p=random_params(rng, n), ch=ch: self._check(p, ch))
        return cases

    def _check(self, params, ch):
        direct = theta_char_eval(ch, params, self.tol).value
        composed = theta_char_via_operators(ch, params, self.tol)
        return CheckResult.judge("", relative_error(composed, direct), self.threshold, characteristic=str(ch))


class EmbeddingSuite(Suite):
    """
    Level-2 family for N = 4: exact invariance under (1! l, ..., N! l^N),
    identity permutation with phases under (1! l, ..., N! l), projective
    quasi-periodicity and subgroup actions as permutations with phases.
    """
    name = "embedding"
    level = 2
    n = 4
    tol = 1e-14
    threshold = 1e-8

    def default_samples(self) -> int:
        return 1

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            params = random_params(rng, self.n, last_imag=(0.2, 0.3), other_imag=0.05)
            cases.append(lambda p=params: self._lattice(p))
            cases.append(lambda p=params: self._unit_lattice(p))
            cases.append(lambda p=params: self._quasi_period(p))
            for a, b in ((1, (0, 0, 0)), (0, (1, 0, 0)), (0, (0, 1, 0)), (0, (0, 0, 1)), (1, (1, 1, 1))):
                cases.append(lambda p=params, a=a, b=b: self._action(p, gamma_l_element(a, b, self.level), f"gamma a={a} b={b}"))
            delta = Characteristic(a=0, b=(Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)), level=self.level)
            cases.append(lambda p=params, d=delta: self._action(p, characteristic_shift_element(d), f"shift {d}"))
        return cases

    def _lattice(self, params):
        base = embed(params, self.level, self.tol).as_array()
        moved = embed(apply_S(family_lattice_shift(self.level, self.n), params), self.level, self.tol).as_array()
        err = float(np.max(np.abs(moved - base)) / np.max(np.abs(base)))
        return CheckResult.judge("embedding-lattice", err, 1e-9)

    def _unit_lattice(self, params):
        shift = scale_translation(unit_lattice_shift(self.level, self.n), self.level)
        report = group_action_on_family(pure_S(shift), params, self.level, self.tol, self.threshold)
        err = max(report.residual, report.unit_error) if report.is_identity else float("inf")
        return CheckResult.judge("embedding-unit-lattice", err, self.threshold)

    def _quasi_period(self, params):
        qp = family_quasi_period(params, self.level)
        base = embed(params, self.level, self.tol)
        moved = embed(qp.new_params, self.level, self.tol)
        match = projective_equal(base, moved, self.threshold)
        err = max(match.residual, relative_error(match.scalar, qp.scalar))
        return CheckResult.judge("embedding-quasi-period", err, self.threshold, sigma_shift=qp.sigma_shift)

    def _action(self, params, g, label):
        report = group_action_on_family(g, params, self.level, self.tol, self.threshold)
        name = f"embedding-action[{label}]"
        err = max(report.residual, report.unit_error)
        if not report.is_bijective:
            return CheckResult.fail(name, err, self.threshold, error="coordinate map is not a permutation")
        return CheckResult.judge(name, err, self.threshold, bijective=True)


class PdeSuite(Suite):
    """Relative residual of every catalog equation, plus the sign-flipped controls."""
    name = "pde"
    threshold = 1e-9
    floor = 0.1

    def default_samples(self) -> int:
        return 100

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            params = random_params(rng, 4)
            for spec in builtin_pdes(4):
                cases.append(lambda p=params, s=spec: self._check(p, s))
        control = random_params(rng, 4)
        for spec in builtin_pdes(4):
            cases.append(lambda p=control, s=flip_sign(spec, 0): self._negative(p, s))
        return cases

    def _check(self, params, spec):
        result = pde_residual(spec, params)
        return CheckResult.judge(f"pde[{spec.name}]", result.relative, self.threshold)

    def _negative(self, params, spec):
        result = pde_residual(spec, params)
        return CheckResult.expect_failure(f"pde[{spec.name}]", result.relative, self.floor)


class HeatFlowSuite(Suite):
    """d Theta / d(imag tau_2) = (1/(4 pi)) Theta_{tau_1 tau_1}."""
    name = "heat-flow"
    threshold = 1e-9

    def cases(self, rng, samples):
        return [lambda p=random_params(rng, int(rng.choice([2, 4]))): self._check(p) for _ in range(samples)]

    def _check(self, params):
        flow = heat_time_derivative(params)
        return CheckResult.judge("", flow.relative_error, self.threshold)


class DerivativeOracleSuite(Suite):
    """theta_derivative against extended-precision central differences."""
    name = "derivative-oracle"
    threshold = 1e-5

    @staticmethod
    def catalog_alphas(n: int) -> List[MultiIndex]:
        seen: Dict[Tuple[int, ...], MultiIndex] = {}
        for spec in builtin_pdes(n):
            for term in spec.terms:
                seen.setdefault(term.alpha.orders, term.alpha)
        return list(seen.values())

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            params = random_params(rng, 4)
            for alpha in self.catalog_alphas(4):
                cases.append(lambda p=params, al=alpha: self._check(p, al))
        return cases

    def _check(self, params, alpha):
        exact = theta_derivative(alpha, params).value
        approx = finite_difference(alpha, params, precise=True)
        return CheckResult.judge(f"derivative-oracle[{alpha.orders}]", relative_error(approx, exact), self.threshold)


class CertificationSuite(Suite):
    """|theta_eval - wide oracle| <= tail_bound."""
    name = "certification"
    padding = 30

    def default_samples(self) -> int:
        return 200

    def cases(self, rng, samples):
        cases = []
        for _ in range(samples):
            n = int(rng.choice([2, 4, 6]))
            cases.append(lambda p=random_params(rng, n, last_imag=(0.2, 2.0)): self._check(p))
        return cases

    def _check(self, params):
        result = theta_eval(params)
        wide = (result.n_min - self.padding, result.n_max + self.padding)
        reference = oracle_sum(params, wide)
        miss = abs(result.value - reference)
        # reported as a ratio so the common threshold of 1 applies
        return CheckResult.judge("", miss / result.tail_bound, 1.0, tail_bound=result.tail_bound)


class ChainSuite(Suite):
    """Theta(chain_project(p)) against the twice-differentiated phase for N = 6."""
    name = "chain"
    threshold = 1e-13

    def cases(self, rng, samples):
        return [lambda p=random_params(rng, 6): self._check(p) for _ in range(samples)]

    def _check(self, params):
        projected, differentiated = chain_consistency(params)
        return CheckResult.judge("", relative_error(differentiated, projected), self.threshold)


def all_suites() -> List[Suite]:
    return [
        QuasiPeriodSuite(),
        LatticeSuite(),
        CommutationSuite(),
        CommutationSuite(PhaseConvention.ALTERNATING),
        MatrixSuite(),
        GroupSuite(),
        CharacteristicCountSuite(),
        CharacteristicOperatorSuite(),
        EmbeddingSuite(),
        PdeSuite(),
        HeatFlowSuite(),
        DerivativeOracleSuite(),
        CertificationSuite(),
        ChainSuite(),
    ]


SUITE_NAMES = tuple(s.name for s in all_suites())


def suite_by_name(name: str) -> Suite:
    for suite in all_suites():
        if suite.name == name:
            return suite
    raise KeyError(f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}")


def run_suites(
    suites: Sequence[Suite],
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    run_name: str = "checks",
) -> Tuple[List[CheckResult], Trajectory]:
    """
    Run suites with one generator per suite, seeded from (seed, crc32(name)),
    so adding or reordering suites never shifts another suite's cases.
    """
    seed = settings.default_seed if seed is None else seed
    log = TrajectoryLogger(run_name, seed=seed)
    results: List[CheckResult] = []
    for suite in suites:
        rng = np.random.default_rng([seed, zlib.crc32(suite.name.encode())])
        results.extend(suite.run(rng, samples, log))
    return results, log.finish()
