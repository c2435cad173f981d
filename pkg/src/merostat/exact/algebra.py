"""Exact matrices over the rationals (and small algebraic extensions).

Matrices are plain :class:`sympy.Matrix` objects with rational, Gaussian
rational, or radical entries.  Every function here is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy as sp

from ..errors import DimensionTooLarge, IrrationalSpectrum

MAX_EXACT_DIM = 8

_LAMBDA = sp.Symbol("lambda")


def exact(value) -> sp.Expr:
    """Parse an exact scalar: int, Fraction, ``"p/q"`` string, or sympy number."""
    if isinstance(value, sp.Basic):
        return sp.expand(value)
    if isinstance(value, str):
        text = re.sub(r"(?<![A-Za-z])i(?![A-Za-z])", "I", value.strip())
        text = re.sub(r"([0-9)])\s*I", r"\1*I", text)
        return sp.expand(sp.sympify(text, rational=True))
    if isinstance(value, float):
        return sp.nsimplify(value, rational=True)
    return sp.expand(sp.sympify(value, rational=True))


def to_matrix(rows) -> sp.Matrix:
    if isinstance(rows, sp.MatrixBase):
        return canon(rows)
    return sp.Matrix([[exact(v) for v in row] for row in rows])


def canon(m: sp.MatrixBase) -> sp.ImmutableMatrix:
    """Expand every entry so that equal numbers have equal representations."""
    return sp.ImmutableMatrix(m.rows, m.cols, [sp.expand(e) for e in m])


def is_zero(e) -> bool:
    e = sp.expand(e)
    z = e.is_zero
    if z is None:
        z = sp.simplify(e) == 0
    return bool(z)


def is_zero_matrix(m: sp.MatrixBase) -> bool:
    return all(is_zero(e) for e in m)


def matrices_equal(a: sp.MatrixBase, b: sp.MatrixBase) -> bool:
    return a.shape == b.shape and is_zero_matrix(a - b)


def identity(n: int) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(sp.eye(n))


def zeros(r: int, c: int | None = None) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(sp.zeros(r, r if c is None else c))


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Spectrum:
    """Exact eigenvalues with multiplicities.

    ``exact`` is False when some factor of the characteristic polynomial could
    not be solved in closed form; such roots are never integers (integer roots
    are always found by rational-root extraction).
    """

    eigenvalues: tuple
    all_integer: bool
    exact: bool
    charpoly: sp.Poly

    def multiset(self) -> list:
        out = []
        for ev, mult in self.eigenvalues:
            out.extend([ev] * mult)
        return out

    @property
    def integer_eigenvalues(self) -> list[int]:
        """Distinct eigenvalues that are explicit integers (symbols are skipped)."""
        return sorted(int(ev) for ev, _ in self.eigenvalues if sp.expand(ev).is_Integer)

    @property
    def has_non_integer(self) -> bool:
        if not self.exact:
            return True
        return any(not _is_integer(ev) for ev, _ in self.eigenvalues)


def _is_integer(e) -> bool:
    """Integer-valued, including symbols declared with ``integer=True``."""
    return sp.expand(e).is_integer is True


def characteristic_polynomial(a: sp.MatrixBase, var: sp.Symbol = _LAMBDA) -> sp.Poly:
    n = a.rows
    if n > MAX_EXACT_DIM:
        raise DimensionTooLarge(f"exact eigenstructure is capped at n={MAX_EXACT_DIM}, got {n}")
    cp = sp.Matrix(a).charpoly(var)
    return sp.Poly(sp.expand(cp.as_expr()), var)


def integer_spectrum(a: sp.MatrixBase) -> Spectrum:
    """All exactly obtainable eigenvalues of ``a`` and whether they are integers."""
    if a.rows != a.cols:
        raise ValueError("matrix must be square")
    p = characteristic_polynomial(a)
    found = sp.roots(p, multiple=False)
    found = {sp.expand(k): v for k, v in found.items()}
    # merge keys that became equal after expansion
    merged: dict = {}
    for k, v in found.items():
        for key in merged:
            if is_zero(key - k):
                merged[key] += v
                break
        else:
            merged[k] = v
    total = sum(merged.values())
    is_exact = total == a.rows
    evs = tuple(sorted(merged.items(), key=lambda kv: _sort_key(kv[0])))
    all_int = is_exact and all(_is_integer(ev) for ev, _ in evs)
    return Spectrum(evs, all_int, is_exact, p)


def _sort_key(e):
    try:
        c = complex(sp.N(e))
        return (0, c.real, c.imag, str(e))
    except TypeError:
        return (1, 0.0, 0.0, str(e))


def numeric_spectrum(a, tol: float = 1e-10) -> list[tuple[complex, int]]:
    """Floating eigenvalues clustered within ``tol`` (fallback for large n)."""
    arr = np.array(sp.Matrix(a).evalf(), dtype=complex) if isinstance(a, sp.MatrixBase) else np.asarray(a, dtype=complex)
    vals = np.linalg.eigvals(arr)
    clusters: list[list[complex]] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(np.mean(c) - v) <= tol * max(1.0, abs(v)):
                c.append(v)
                break
        else:
            clusters.append([v])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


# ---------------------------------------------------------------------------
# Jordan form


@dataclass(frozen=True)
class JordanForm:
    transform: sp.ImmutableMatrix
    blocks: tuple  # ((eigenvalue, size), ...)

    @property
    def matrix(self) -> sp.ImmutableMatrix:
        return jordan_matrix(self.blocks)

    def reproduces(self, a: sp.MatrixBase) -> bool:
        T = sp.Matrix(self.transform)
        return matrices_equal(T * sp.Matrix(self.matrix) * T.inv(), sp.Matrix(a))


def jordan_matrix(blocks) -> sp.ImmutableMatrix:
    n = sum(size for _, size in blocks)
    J = sp.zeros(n, n)
    i = 0
    for ev, size in blocks:
        for k in range(size):
            J[i + k, i + k] = ev
            if k + 1 < size:
                J[i + k, i + k + 1] = 1
        i += size
    return sp.ImmutableMatrix(J)


def parse_jordan_blocks(J: sp.MatrixBase) -> tuple | None:
    """Blocks of ``J`` if it is an upper bidiagonal Jordan matrix, else None."""
    n = J.rows
    for i in range(n):
        for j in range(n):
            if j != i and j != i + 1 and not is_zero(J[i, j]):
                return None
    blocks = []
    i = 0
    while i < n:
        ev = sp.expand(J[i, i])
        size = 1
        while i + size < n:
            sup = sp.expand(J[i + size - 1, i + size])
            if sup == 1 and is_zero(J[i + size, i + size] - ev):
                size += 1
            elif is_zero(sup):
                break
            else:
                return None
        blocks.append((ev, size))
        i += size
    return tuple(blocks)


def jordan_decomposition(a: sp.MatrixBase, target=None) -> JordanForm:
    """``T`` and blocks with ``T^-1 a T`` block diagonal.

    When ``target`` is given, a block with that eigenvalue is moved last (the
    block that a subsequent shearing step will lower).
    """
    a = sp.Matrix(a)
    if a.rows > MAX_EXACT_DIM:
        raise DimensionTooLarge(f"n={a.rows} exceeds {MAX_EXACT_DIM}")
    spec = integer_spectrum(a)
    if not spec.exact or any(isinstance(ev, sp.CRootOf) or ev.has(sp.CRootOf)
                             for ev, _ in spec.eigenvalues):
        raise IrrationalSpectrum("eigenvalues are not exactly representable")
    blocks = parse_jordan_blocks(a)
    if blocks is not None:
        T = sp.eye(a.rows)
    else:
        try:
            T, J = a.jordan_form()
        except (sp.matrices.common.MatrixError, NotImplementedError, ValueError) as exc:
            raise IrrationalSpectrum(str(exc)) from exc
        T = canon(T)
        blocks = parse_jordan_blocks(canon(J))
        if blocks is None:
            raise IrrationalSpectrum("could not read Jordan blocks")
        T, blocks = _diagonal_order(sp.Matrix(T), blocks, [a[i, i] for i in range(a.rows)])
    T = sp.Matrix(T)
    if target is not None:
        T, blocks = _move_block_last(T, blocks, exact(target))
    return JordanForm(canon(T), tuple(blocks))


def _block_starts(blocks):
    starts, i = [], 0
    for _, size in blocks:
        starts.append(i)
        i += size
    return starts


def _permute_blocks(T: sp.Matrix, blocks, order):
    starts = _block_starts(blocks)
    cols = []
    for k in order:
        cols.extend(range(starts[k], starts[k] + blocks[k][1]))
    return T.extract(list(range(T.rows)), cols), [blocks[k] for k in order]


def _diagonal_order(T: sp.Matrix, blocks, diagonal):
    """Stable-sort blocks by where their eigenvalue first appears on ``diagonal``."""
    def rank(ev):
        for i, d in enumerate(diagonal):
            if is_zero(d - ev):
                return i
        return len(diagonal)
    order = sorted(range(len(blocks)), key=lambda k: rank(blocks[k][0]))
    return _permute_blocks(T, blocks, order)


def _move_block_last(T: sp.Matrix, blocks, target):
    idx = None
    for k, (ev, size) in enumerate(blocks):
        if is_zero(ev - target):
            idx = k  # last matching block
    if idx is None:
        raise ValueError(f"no Jordan block with eigenvalue {target}")
    order = [k for k in range(len(blocks)) if k != idx] + [idx]
    return _permute_blocks(T, blocks, order)


# ---------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class LinearSolution:
    """General solution ``particular + nullspace @ C`` for arbitrary ``C``."""

    particular: sp.ImmutableMatrix
    nullspace: tuple

    @property
    def unique(self) -> bool:
        return not self.nullspace


def _iszero(e):
    return is_zero(e)


def solve_possibly_singular(M: sp.MatrixBase, rhs: sp.MatrixBase) -> LinearSolution | None:
    """Solve ``M X = rhs`` exactly; ``None`` when ``rhs`` is outside the column space."""
    M = sp.Matrix(M)
    rhs = sp.Matrix(rhs)
    if M.rows != rhs.rows:
        raise ValueError("row dimensions differ")
    ncols = M.cols
    aug = M.row_join(rhs)
    R, pivots = aug.rref(iszerofunc=_iszero, simplify=lambda e: sp.expand(e))
    if any(p >= ncols for p in pivots):
        return None
    X = sp.zeros(ncols, rhs.cols)
    for row, col in enumerate(pivots):
        for j in range(rhs.cols):
            X[col, j] = sp.expand(R[row, ncols + j])
    null = tuple(canon(v) for v in nullspace(M))
    return LinearSolution(canon(X), null)


def nullspace(M: sp.MatrixBase) -> list:
    M = sp.Matrix(M)
    R, pivots = M.rref(iszerofunc=_iszero, simplify=lambda e: sp.expand(e))
    free = [j for j in range(M.cols) if j not in pivots]
    basis = []
    for f in free:
        v = sp.zeros(M.cols, 1)
        v[f] = 1
        for row, col in enumerate(pivots):
            v[col] = sp.expand(-R[row, f])
        basis.append(v)
    return basis


def row_echelon_basis(vectors: Sequence[sp.MatrixBase]) -> list:
    """Reduced row echelon basis of the span of column vectors.

    Each returned vector has its first nonzero entry at a distinct position and
    entries of other basis vectors vanish there.
    """
    if not vectors:
        return []
    N = sp.Matrix.hstack(*vectors).T
    R, pivots = N.rref(iszerofunc=_iszero, simplify=lambda e: sp.expand(e))
    return [canon(R[i, :].T) for i in range(len(pivots))]


def inverse(M: sp.MatrixBase) -> sp.ImmutableMatrix:
    return canon(sp.Matrix(M).inv(method="LU", iszerofunc=_iszero))


# ---------------------------------------------------------------------------
# fraction-free determinants


def bareiss_determinant(rows):
    """Determinant of a square matrix of :class:`sympy.Poly` by Bareiss elimination.

    All intermediate entries stay polynomial; each division is exact.
    """
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in M):
        raise ValueError("matrix must be square")
    one = M[0][0].one
    sign = 1
    prev = one
    for k in range(n - 1):
        if M[k][k].is_zero:
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero), None)
            if swap is None:
                return M[0][0].zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]).exquo(prev)
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det
