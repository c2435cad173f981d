"""Laurent-series solutions at a first-order pole.

For ``W' = A W`` with ``A = a_{-1}/t + a_0 + a_1 t + ...`` (``t = x - x0``) and
``W = sum_{k>=m} b_k t^k`` the coefficients obey

    ((k+1) I - a_{-1}) b_{k+1} = sum_{j>=0} a_j b_{k-j}.

Only the orders between the smallest and the greatest integer eigenvalue of
``a_{-1}`` carry freedom; above the greatest one each ``b_{k+1}`` is forced.
The whole space of column solutions of Laurent form is therefore the
nullspace of one finite block system, which is what :func:`solution_space`
computes.  The inverse side ``Y' = -Y A`` is the same problem for ``-A^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp
from sympy.polys.matrices import DomainMatrix

from ..errors import Infeasible, NoIntegerEigenvalue, TruncationTooShort
from ..exact import dm
from ..exact.algebra import integer_spectrum
from .laurent import LaurentMatrix


@dataclass(frozen=True)
class LaurentSolution:
    """A family of Laurent solutions sharing the leading exponent ``m``.

    ``series`` holds one solution per column (``side="forward"``) or per row
    (``side="inverse"``); every linear combination of them is again a
    solution, which is the free-parameter description of the family.
    """

    m: int
    series: LaurentMatrix
    side: str = "forward"
    free_params: str = field(default="")

    @property
    def leading(self) -> sp.ImmutableMatrix:
        return self.series.coeff(self.m)

    @property
    def dimension(self) -> int:
        return self.series.shape[1] if self.side == "forward" else self.series.shape[0]

    @property
    def K(self):
        return self.series.k_max


@dataclass(frozen=True)
class SolutionSpace:
    """All column solutions of Laurent form, graded by leading exponent."""

    exponents: tuple  # leading exponent of each basis column, nonincreasing order of columns
    series: LaurentMatrix | None  # n x d, None when the space is zero
    integer_eigenvalues: tuple
    K: int

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    def families(self, side: str = "forward") -> list[LaurentSolution]:
        out = []
        if self.series is None:
            return out
        for m in sorted(set(self.exponents)):
            cols = [i for i, e in enumerate(self.exponents) if e == m]
            out.append(_family(self.series, cols, m, side))
        return out


def _family(series: LaurentMatrix, cols, m, side) -> LaurentSolution:
    picked = LaurentMatrix(
        series.low,
        [series.dcoeff(k).extract(list(range(series.n)), cols)
         for k in range(series.low, series.high + 1)],
        series.k_max,
        series.center,
        (series.shape[0], len(cols)),
        series.domain,
    )
    if side == "inverse":
        picked = picked.transpose()
    desc = (f"{len(cols)} independent solutions with leading exponent {m}; "
            "any linear combination c of them is a solution")
    return LaurentSolution(m, picked, side, desc)


def _residue_check(A: LaurentMatrix):
    if A.is_zero:
        return
    if A.low < -1:
        raise ValueError(f"expected a pole of order at most one, got lowest order {A.low}")


def solution_space(A: LaurentMatrix, K: int) -> SolutionSpace:
    """Basis of all Laurent column solutions of ``W' = A W``, expanded through order ``K``."""
    _residue_check(A)
    n = A.n
    a_m1 = sp.Matrix(A.coeff(-1))
    spec = integer_spectrum(a_m1)
    ints = spec.integer_eigenvalues
    if not ints:
        raise NoIntegerEigenvalue("the residue matrix has no integer eigenvalue")
    lo, hi = min(ints), max(ints)
    K = max(K, hi)
    L = hi - lo + 1
    need = hi - 1 - lo
    if A.k_max is not None and A.k_max < need:
        raise TruncationTooShort(f"coefficients through order {need} needed, have {A.k_max}")
    F = A.domain
    am1 = A.dcoeff(-1)
    eye = dm.identity(n, F)
    # block system for the unknowns (b_lo, ..., b_hi) stacked into one vector
    rows = []
    for e in range(lo, hi + 1):
        blocks = [dm.zeros((n, n), F) for _ in range(L)]
        blocks[e - lo] = eye * F.convert(e) - am1
        for j in range(0, e - lo):
            blocks[e - 1 - j - lo] = -A.dcoeff(j)
        rows.append(DomainMatrix.hstack(*blocks))
    big = DomainMatrix.vstack(*rows)
    null = big.nullspace().convert_to(F)
    if null.shape[0] == 0 or null.is_zero_matrix:
        return SolutionSpace((), None, tuple(ints), K)
    basis, pivots = null.rref()
    d = len(pivots)
    basis = basis[0:d, :]
    exps = [lo + p // n for p in pivots]
    cols = basis.transpose()  # (n L) x d, one solution per column
    coeffs = [cols[(e - lo) * n:(e - lo + 1) * n, :] for e in range(lo, hi + 1)]
    coeffs = _extend(A, am1, lo, hi, coeffs, K)
    k_max = lo + len(coeffs) - 1
    series = LaurentMatrix(lo, coeffs, k_max, A.center, (n, d), F)
    return SolutionSpace(tuple(exps), series, tuple(ints), k_max)


def _extend(A, am1, lo, hi, coeffs, K):
    """Forced continuation ``b_{k+1}`` for ``k+1 > hi`` up to ``K`` (or A's precision)."""
    F = A.domain
    n = am1.shape[0]
    eye = dm.identity(n, F)
    coeffs = list(coeffs)
    for k1 in range(hi + 1, K + 1):
        k = k1 - 1
        if A.k_max is not None and k - lo > A.k_max:
            break
        rhs = None
        for j in range(0, min(k - lo, A.high) + 1):
            aj = A.dcoeff(j)
            if aj.is_zero_matrix:
                continue
            term = aj * coeffs[k - j - lo]
            rhs = term if rhs is None else rhs + term
        if rhs is None:
            rhs = dm.zeros(coeffs[0].shape, F)
        coeffs.append((eye * F.convert(k1) - am1).inv() * rhs)
    return coeffs


def _negated_transpose(A: LaurentMatrix) -> LaurentMatrix:
    return (-A).transpose()


def forward_recurrence(A: LaurentMatrix, K: int, m: int | None = None) -> list[LaurentSolution]:
    """Laurent solutions of ``W' = A W`` grouped by leading exponent.

    With ``m`` given, only the family whose leading coefficient sits at order
    ``m`` is returned, and :class:`Infeasible` is raised when no chain
    ``b_m != 0, ..., b_M`` exists.
    """
    space = solution_space(A, K)
    return _select(space, m, "forward")


def inverse_recurrence(A: LaurentMatrix, K: int, p: int | None = None) -> list[LaurentSolution]:
    """Laurent solutions of ``Y' = -Y A`` (row solutions) grouped by leading exponent ``p``."""
    space = solution_space(_negated_transpose(A), K)
    return _select(space, p, "inverse")


def _select(space: SolutionSpace, m, side) -> list[LaurentSolution]:
    fams = space.families(side)
    if m is not None:
        if m not in space.integer_eigenvalues:
            raise Infeasible(f"{m} is not an integer eigenvalue of the residue matrix")
        fams = [f for f in fams if f.m == m]
    if not fams:
        where = f" with leading exponent {m}" if m is not None else ""
        raise Infeasible(f"no Laurent solution{where}: the resonance equations have no solution")
    return fams


def recurrence_residual(A: LaurentMatrix, sol: LaurentSolution) -> bool:
    """True iff the stored coefficients satisfy the recurrence at every computed order."""
    s = sol.series
    if sol.side == "inverse":
        s = s.transpose()
        A = _negated_transpose(A)
    diff = s.derivative() - A @ s
    return diff.is_zero
