"""
Built-in linear differential equations satisfied by the theta function.

Every equation is written in tau-derivatives only. The time-like variables
enter through tau_2 = i t and tau_4 = i eta, so d/dt = i d/dtau_2 and
d/deta = i d/dtau_4:

    heat         i Th_{2}    - 1/(4 pi) Th_{11}
    tau-heat     12 pi i Th_{4} - Th_{22}
    delta-mixed  48 pi^2 Th_{4} + Th_{211}
    eta-mixed    4 pi i Th_{4}  - Th_{22} + Th_{31}
    quartic      Th_{1111} + 16 pi^2 Th_{22}
    rho-cubic    24 pi^2 Th_{3} + Th_{111}

Coefficients are kept as exact sympy expressions so annihilation of each
summand can be checked symbolically.
"""
from functools import lru_cache
from typing import List, Tuple

import sympy
from pydantic import BaseModel, field_validator

from src.core.params import MultiIndex
from src.errors import DimensionMismatch

_N = sympy.Symbol("n")


@lru_cache(maxsize=None)
def _parse(expression: str) -> sympy.Expr:
    return sympy.sympify(expression)


class PdeTerm(BaseModel):
    """coefficient * d^|alpha| Theta / dtau^alpha."""
    coefficient: str
    alpha: MultiIndex

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("coefficient")
    @classmethod
    def _parses(cls, value: str) -> str:
        try:
            _parse(value)
        except (sympy.SympifyError, SyntaxError) as e:
            raise ValueError(f"coefficient {value!r} is not a sympy expression: {e}")
        return value

    @property
    def exact(self) -> sympy.Expr:
        return _parse(self.coefficient)

    @property
    def value(self) -> complex:
        return complex(sympy.N(self.exact, 20))


class PdeSpec(BaseModel):
    name: str
    terms: Tuple[PdeTerm, ...]

    model_config = {"frozen": True, "extra": "forbid"}

    @property
    def N(self) -> int:
        return len(self.terms[0].alpha.orders)

    @property
    def max_order(self) -> int:
        return max(t.alpha.total_order for t in self.terms)


# name -> (lowest N it needs, [(coefficient, 1-based derivative indices)])
_CATALOG = {
    "heat": (2, [("I", (2,)), ("-1/(4*pi)", (1, 1))]),
    "tau-heat": (4, [("12*pi*I", (4,)), ("-1", (2, 2))]),
    "delta-mixed": (4, [("48*pi**2", (4,)), ("1", (2, 1, 1))]),
    "eta-mixed": (4, [("4*pi*I", (4,)), ("-1", (2, 2)), ("1", (3, 1))]),
    "quartic": (2, [("1", (1, 1, 1, 1)), ("16*pi**2", (2, 2))]),
    "rho-cubic": (4, [("24*pi**2", (3,)), ("1", (1, 1, 1))]),
}

PDE_NAMES = tuple(_CATALOG)


def build_pde(name: str, n_params: int) -> PdeSpec:
    """
    Raises:
        KeyError: for an unknown name
        DimensionMismatch: if the equation needs more parameters than n_params
    """
    needs, terms = _CATALOG[name]
    if n_params < needs:
        raise DimensionMismatch(f"{name} needs N >= {needs}, got N={n_params}")
    return PdeSpec(
        name=name,
        terms=tuple(
            PdeTerm(coefficient=coef, alpha=MultiIndex.from_pairs(n_params, *indices))
            for coef, indices in terms
        ),
    )


def builtin_pdes(n_params: int) -> List[PdeSpec]:
    """The catalog for N parameters; N = 2 admits only heat and quartic."""
    if n_params < 2 or n_params % 2:
        raise ValueError(f"N must be an even integer >= 2, got {n_params}")
    return [build_pde(name, n_params) for name, (needs, _) in _CATALOG.items() if n_params >= needs]


def prefactor_polynomial(spec: PdeSpec) -> sympy.Poly:
    """sum coeff * prod_k (2 pi i n^k / k!)^alpha_k as a polynomial in n."""
    total = sympy.Integer(0)
    for term in spec.terms:
        factor = term.exact
        for k, order in enumerate(term.alpha.orders, start=1):
            factor *= (2 * sympy.pi * sympy.I * _N ** k / sympy.factorial(k)) ** order
        total += factor
    return sympy.Poly(sympy.expand(total), _N)


def is_annihilating(spec: PdeSpec) -> bool:
    """True when the operator kills every summand exp(2 pi i phi(n)) identically in n."""
    return prefactor_polynomial(spec).is_zero


def flip_sign(spec: PdeSpec, index: int) -> PdeSpec:
    """The same equation with term `index` negated."""
    if not 0 <= index < len(spec.terms):
        raise IndexError(f"term index {index} outside 0..{len(spec.terms) - 1}")
    terms = list(spec.terms)
    target = terms[index]
    terms[index] = PdeTerm(coefficient=f"-({target.coefficient})", alpha=target.alpha)
    return PdeSpec(name=f"{spec.name}~flip{index}", terms=tuple(terms))
