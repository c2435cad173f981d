"""Strong-regularity classification of a singular point.

A point is strong regular when the system has a fundamental solution ``W``
such that both ``W`` and ``W^{-1}`` are Laurent series there.  The decision
used here:

* a non-integer residue eigenvalue rules it out (the local monodromy cannot be
  trivial);
* otherwise the Laurent column solutions form a space whose dimension is
  computed exactly; dimension ``n`` means strong regular, anything less means
  a logarithm is unavoidable.

A strong-regular verdict is always backed by an explicit witness: ``W`` from
the forward recurrence, ``W^{-1}`` assembled from the inverse recurrence, and a
check that ``W W^{-1} = I`` coefficient by coefficient through order ``K``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from ..errors import (
    PatternMismatch,
    TruncationTooShort,
    UnsupportedPoleOrder,
)
from ..exact.algebra import (
    MAX_EXACT_DIM,
    integer_spectrum,
    is_zero,
    matrices_equal,
    numeric_spectrum,
)
from .laurent import GaugeTransform, LaurentMatrix, gauge_transform
from .recurrence import LaurentSolution, solution_space


class Verdict(enum.Enum):
    STRONG_REGULAR = "StrongRegular"
    NOT_STRONG_REGULAR = "NotStrongRegular"
    INCONCLUSIVE = "Inconclusive"


class Reason(enum.Enum):
    NONE = "None"
    NON_INTEGER_EIGENVALUE = "NonIntegerEigenvalue"
    RECURRENCE_INFEASIBLE = "RecurrenceInfeasible"
    PRODUCT_CHECK_FAILED = "ProductCheckFailed"
    EXACT_ARITHMETIC_UNAVAILABLE = "ExactArithmeticUnavailable"
    TRUNCATION_EXHAUSTED = "TruncationExhausted"


@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    reason: Reason
    witness: tuple | None = None  # (W, W^{-1}) as LaurentSolution objects
    K: int | None = None
    residue_spectrum: tuple = ()
    solution_dimension: int | None = None
    gauge: GaugeTransform | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def strong_regular(self) -> bool:
        return self.verdict is Verdict.STRONG_REGULAR


def _report(verdict, reason, **kw) -> ClassificationReport:
    return ClassificationReport(verdict, reason, **kw)


def reduce_second_order_pole(A: LaurentMatrix) -> tuple[LaurentMatrix, GaugeTransform]:
    """Bring a 2x2 second-order pole to first order with ``diag(1/t, 1)`` or ``diag(1, 1/t)``."""
    if A.n != 2:
        raise PatternMismatch("second-order poles are supported for 2x2 systems only")
    for powers in ([-1, 0], [0, -1]):
        F = GaugeTransform.diagonal_monomials(powers, A.center)
        B = gauge_transform(A, F)
        if B.is_zero or B.low >= -1:
            return B, F
    raise PatternMismatch("no diagonal monomial gauge lowers this pole to first order")


def strong_regularity_classify(A: LaurentMatrix, K: int | None = None) -> ClassificationReport:
    if A.shape[0] != A.shape[1]:
        raise ValueError("coefficient matrix must be square")
    n = A.n
    gauge = None
    B = A
    if not A.is_zero and A.low <= -3:
        raise UnsupportedPoleOrder(f"pole of order {-A.low} is not supported")
    if not A.is_zero and A.low == -2:
        B, gauge = reduce_second_order_pole(A)

    # residue spectrum
    a_m1 = sp.Matrix(B.coeff(-1)) if not B.is_zero else sp.zeros(n, n)
    if n > MAX_EXACT_DIM:
        evs = numeric_spectrum(np.array(a_m1.evalf(), dtype=complex))
        off = [ev for ev, _ in evs if abs(ev - round(ev.real)) > 1e-8]
        if off:
            return _report(Verdict.NOT_STRONG_REGULAR, Reason.NON_INTEGER_EIGENVALUE,
                           residue_spectrum=tuple(evs), gauge=gauge,
                           detail="numeric spectrum has non-integer eigenvalues")
        return _report(Verdict.INCONCLUSIVE, Reason.EXACT_ARITHMETIC_UNAVAILABLE,
                       residue_spectrum=tuple(evs), gauge=gauge,
                       detail=f"n={n} exceeds the exact cap of {MAX_EXACT_DIM}")
    spec = integer_spectrum(a_m1)
    if spec.has_non_integer:
        return _report(Verdict.NOT_STRONG_REGULAR, Reason.NON_INTEGER_EIGENVALUE,
                       residue_spectrum=spec.eigenvalues, gauge=gauge,
                       detail="residue matrix has a non-integer eigenvalue")
    ints = spec.integer_eigenvalues
    lo, hi = min(ints), max(ints)
    if K is None:
        K = hi + n + 5

    # one extra order on each side absorbs the shift of a second-order gauge
    slack = 0 if gauge is None else 1
    try:
        space = solution_space(B, K + hi + slack)
        if space.dimension < n:
            return _report(Verdict.NOT_STRONG_REGULAR, Reason.RECURRENCE_INFEASIBLE,
                           K=K, residue_spectrum=spec.eigenvalues,
                           solution_dimension=space.dimension, gauge=gauge,
                           detail=f"only {space.dimension} of {n} Laurent solutions exist")
        inv_space = solution_space((-B).transpose(), K - lo + slack)
    except TruncationTooShort as exc:
        return _report(Verdict.INCONCLUSIVE, Reason.TRUNCATION_EXHAUSTED, K=K,
                       residue_spectrum=spec.eigenvalues, gauge=gauge, detail=str(exc))
    if inv_space.dimension < n:
        return _report(Verdict.NOT_STRONG_REGULAR, Reason.RECURRENCE_INFEASIBLE,
                       K=K, residue_spectrum=spec.eigenvalues,
                       solution_dimension=space.dimension, gauge=gauge,
                       detail=f"only {inv_space.dimension} of {n} inverse-side solutions exist")

    W = space.series
    Y0 = inv_space.series.transpose()
    if W.known_through < K + hi + slack or Y0.known_through < K - lo + slack:
        return _report(Verdict.INCONCLUSIVE, Reason.TRUNCATION_EXHAUSTED, K=K,
                       residue_spectrum=spec.eigenvalues, gauge=gauge,
                       detail="coefficient data too short for the product check")
    C = _constant_pairing(Y0, W)
    Winv = LaurentMatrix.constant(C.inv(), A.center) @ Y0
    if gauge is not None:
        W = gauge.F @ W
        Winv = Winv @ gauge.inverse_series()
    ok = _identity_through(W @ Winv, K)
    if not ok:
        return _report(Verdict.NOT_STRONG_REGULAR, Reason.PRODUCT_CHECK_FAILED, K=K,
                       residue_spectrum=spec.eigenvalues, gauge=gauge,
                       detail="W W^-1 differs from I within the checked orders")
    witness = (
        LaurentSolution(W.low, W, "forward", "fundamental solution W"),
        LaurentSolution(Winv.low, Winv, "inverse", "W^-1"),
    )
    scalar = matrices_equal(a_m1, a_m1[0, 0] * sp.eye(n))
    extra = {"two_distinct_integer_eigenvalues": len(set(ints)) >= 2, "scalar_residue": scalar}
    return _report(Verdict.STRONG_REGULAR, Reason.NONE, witness=witness, K=K,
                   residue_spectrum=spec.eigenvalues, solution_dimension=n, gauge=gauge,
                   detail="W and W^-1 are Laurent series", extra=extra)


def _constant_pairing(Y: LaurentMatrix, W: LaurentMatrix):
    """``Y W`` is constant for solutions of the two systems; return that constant."""
    return (Y @ W).dcoeff(0)


def _identity_through(P: LaurentMatrix, K: int) -> bool:
    if P.known_through < K:
        raise TruncationTooShort(f"product known through {P.k_max} < {K}")
    diff = P - LaurentMatrix.identity(P.n, P.center)
    return diff.is_zero or diff.low > K


# ---------------------------------------------------------------------------
# special-case checkers


def katsnelson_volok_check(a_m1, a_0) -> bool:
    """``a_{-1}^2 = -a_{-1}`` and ``a_{-1} a_0 a_{-1} = -a_0 a_{-1}``, exactly."""
    a = sp.Matrix(a_m1)
    b = sp.Matrix(a_0)
    if a.shape != b.shape or a.rows != a.cols:
        raise ValueError("square matrices of equal size expected")
    return matrices_equal(a * a, -a) and matrices_equal(a * b * a, -b * a)


def katsnelson_volok_solution(a_m1, a_0, c) -> tuple[sp.Matrix, sp.Matrix]:
    """Leading coefficients ``b_{-1} = a_{-1} c`` and ``b_0 = a_0 a_{-1} c`` of the ``m = -1`` solution."""
    a = sp.Matrix(a_m1)
    c = sp.Matrix(c)
    return (a * c).expand(), (sp.Matrix(a_0) * a * c).expand()


@dataclass(frozen=True)
class SecondOrderPattern:
    gamma_m2: object
    gamma_m1: object
    alpha_0: object
    beta_0: object

    @property
    def condition_holds(self) -> bool:
        return is_zero(self.gamma_m2 * (self.alpha_0 - self.beta_0) - self.gamma_m1)


def second_order_pattern(A: LaurentMatrix) -> SecondOrderPattern:
    """Read the scalars of a 2x2 system whose (1,2) entry has an exact double pole.

    The (2,1) entry must vanish to order at least two and the diagonal must be
    holomorphic.
    """
    if A.shape != (2, 2):
        raise PatternMismatch("2x2 system expected")
    if A.is_zero or A.low != -2:
        raise PatternMismatch("the coefficient matrix must have a pole of order exactly two")
    try:
        c = {k: sp.Matrix(A.coeff(k)) for k in (-2, -1, 0, 1)}
    except TruncationTooShort as exc:
        raise PatternMismatch(f"not enough coefficients to verify the pattern: {exc}") from exc
    if is_zero(c[-2][0, 1]):
        raise PatternMismatch("(1,2) entry has no double pole")
    for k in (-2, -1):
        if not (is_zero(c[k][0, 0]) and is_zero(c[k][1, 1])):
            raise PatternMismatch("diagonal entries must be holomorphic")
    for k in (-2, -1, 0, 1):
        if not is_zero(c[k][1, 0]):
            raise PatternMismatch("(2,1) entry must vanish to order two")
    return SecondOrderPattern(c[-2][0, 1], c[-1][0, 1], c[0][0, 0], c[0][1, 1])


def second_order_pole_check(A: LaurentMatrix) -> bool:
    """``gamma_{-2} (alpha_0 - beta_0) = gamma_{-1}`` for the double-pole pattern."""
    return second_order_pattern(A).condition_holds


__all__ = [
    "ClassificationReport",
    "Reason",
    "SecondOrderPattern",
    "Verdict",
    "katsnelson_volok_check",
    "katsnelson_volok_solution",
    "reduce_second_order_pole",
    "second_order_pattern",
    "second_order_pole_check",
    "strong_regularity_classify",
]
