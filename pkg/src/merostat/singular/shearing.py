"""Shearing reduction of the residue spectrum.

A constant conjugation brings ``a_{-1}`` to Jordan form with the target block
last; the diagonal gauge ``S = diag(1, ..., 1, t)`` then lowers one copy of the
target eigenvalue by one and keeps the rest of the spectrum.  Passing
``whole_block=True`` shears the full target block with ``diag(I, t I_q)``,
which lowers every copy in that block.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from ..errors import IrrationalSpectrum
from ..exact.algebra import integer_spectrum, jordan_decomposition
from .laurent import GaugeTransform, LaurentMatrix, gauge_transform


@dataclass(frozen=True)
class ShearResult:
    A: LaurentMatrix
    gauge: GaugeTransform  # W_in = F W_out
    target: object


def shear(A: LaurentMatrix, target=None, whole_block: bool = False) -> ShearResult:
    a_m1 = sp.Matrix(A.coeff(-1))
    spec = integer_spectrum(a_m1)
    if target is None:
        ints = spec.integer_eigenvalues
        if not ints:
            raise IrrationalSpectrum("no integer eigenvalue to lower")
        target = max(ints)
    jf = jordan_decomposition(a_m1, target=target)
    T = sp.Matrix(jf.transform)
    n = A.n
    q = jf.blocks[-1][1] if whole_block else 1
    powers = [0] * (n - q) + [1] * q
    S = GaugeTransform.diagonal_monomials(powers, A.center)
    F = GaugeTransform.constant(T, A.center).compose(S)
    B = A.conjugate_by(T)
    C = gauge_transform(B, S)
    return ShearResult(C, F, target)


def shearing_step(A: LaurentMatrix, target=None, whole_block: bool = False) -> LaurentMatrix:
    """Lower one copy of ``target`` (default: the greatest integer eigenvalue) by one."""
    return shear(A, target, whole_block).A


def reduce_to_min_spectrum(A: LaurentMatrix, with_gauge: bool = False):
    """Shear until every integer residue eigenvalue equals the smallest one."""
    F = GaugeTransform.constant(sp.eye(A.n), A.center)
    current = A
    while True:
        ints = integer_spectrum(sp.Matrix(current.coeff(-1))).integer_eigenvalues
        if not ints or min(ints) == max(ints):
            break
        res = shear(current, max(ints))
        current = res.A
        F = F.compose(res.gauge)
    return (current, F) if with_gauge else current
