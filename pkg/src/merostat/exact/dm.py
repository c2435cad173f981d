"""Conversion between sympy matrices and :class:`DomainMatrix` over exact fields.

Entries are placed in the smallest field sympy can construct for them
(QQ, QQ_I, an algebraic extension, or a rational function field when symbols
are present).  Elements of these fields have canonical representations, so
zero tests are exact and products avoid expression swelling.
"""

from __future__ import annotations

import sympy as sp
from sympy.polys.constructor import construct_domain
from sympy.polys.domains import EX
from sympy.polys.matrices import DomainMatrix


def domain_for(exprs):
    exprs = [sp.sympify(e) for e in exprs] or [sp.Integer(0)]
    try:
        K, _ = construct_domain(exprs, field=True, extension=True)
    except (sp.polys.polyerrors.PolynomialError, NotImplementedError, ValueError):
        K = EX
    return K


def unify(*domains):
    K = domains[0]
    for D in domains[1:]:
        if D == K:
            continue
        try:
            K = K.unify(D)
        except (sp.polys.polyerrors.UnificationFailed, NotImplementedError):
            return EX
    if not K.is_Field:
        K = K.get_field()
    return K


def to_dm(M, K=None) -> DomainMatrix:
    if isinstance(M, DomainMatrix):
        return M if K is None or M.domain == K else M.convert_to(K)
    M = sp.Matrix(M)
    if K is None:
        K = domain_for(list(M))
    rows = [[sp.expand(e) for e in M.row(i)] for i in range(M.rows)]
    if M.rows == 0 or M.cols == 0:
        return DomainMatrix.zeros(M.shape, K)
    try:
        return DomainMatrix.from_list_sympy(M.rows, M.cols, rows, domain=K)
    except (sp.polys.polyerrors.CoercionFailed, NotImplementedError):
        K2 = unify(K, domain_for(list(M)))
        return DomainMatrix.from_list_sympy(M.rows, M.cols, rows, domain=K2)


def to_sympy(D: DomainMatrix) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(D.to_Matrix().applyfunc(sp.expand))


def common(mats) -> list[DomainMatrix]:
    """Convert matrices to a shared field."""
    dms = [to_dm(m) for m in mats]
    if not dms:
        return dms
    K = unify(*[d.domain for d in dms])
    return [d.convert_to(K) if d.domain != K else d for d in dms]


def scalar(value, K):
    """``value`` as an element of ``K`` (widening ``K`` if necessary)."""
    v = sp.expand(sp.sympify(value))
    try:
        return K, K.from_sympy(v)
    except (sp.polys.polyerrors.CoercionFailed, NotImplementedError):
        K2 = unify(K, domain_for([v]))
        return K2, K2.from_sympy(v)


def identity(n: int, K) -> DomainMatrix:
    return DomainMatrix.eye(n, K)


def zeros(shape, K) -> DomainMatrix:
    return DomainMatrix.zeros(tuple(shape), K)
