"""Exact scalars, matrices, polynomials and rational functions."""

from .algebra import (
    JordanForm,
    LinearSolution,
    Spectrum,
    bareiss_determinant,
    canon,
    exact,
    integer_spectrum,
    jordan_decomposition,
    numeric_spectrum,
    solve_possibly_singular,
    to_matrix,
)
from .ratfunc import RationalFunction, RootsPoles, ratfunc_roots_poles, residues

__all__ = [
    "JordanForm",
    "LinearSolution",
    "RationalFunction",
    "RootsPoles",
    "Spectrum",
    "bareiss_determinant",
    "canon",
    "exact",
    "integer_spectrum",
    "jordan_decomposition",
    "numeric_spectrum",
    "ratfunc_roots_poles",
    "residues",
    "solve_possibly_singular",
    "to_matrix",
]
