"""Truncated matrix Laurent series at a point.

``A(x) = sum_{k >= low} a_k (x - x0)^k`` with exact coefficients.  Each series
records how far it is known: ``k_max`` is the last order that is correct, or
``None`` when the stored coefficients are the whole (terminating) series.
Arithmetic propagates ``k_max`` so a product never claims more orders than its
factors determine.

Coefficients are held as :class:`DomainMatrix` over one exact field per
series; :meth:`LaurentMatrix.coeff` hands out ordinary sympy matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import sympy as sp
from sympy.polys.matrices import DomainMatrix

from ..errors import TruncationTooShort
from ..exact import dm as D
from ..exact.algebra import is_zero
from ..exact.ratfunc import RationalFunction, laurent_coefficients

_INF = float("inf")


def _min_known(*values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


def _is_zero_dm(m: DomainMatrix) -> bool:
    return m.is_zero_matrix


class LaurentMatrix:
    """Immutable truncated Laurent series with ``rows x cols`` exact coefficients."""

    __slots__ = ("low", "_c", "k_max", "center", "shape", "domain", "_sym")

    def __init__(self, low: int, coeffs, k_max: int | None = None, center=0, shape=None, domain=None):
        coeffs = list(coeffs)
        if shape is None:
            if not coeffs:
                raise ValueError("shape is required for an empty series")
            first = coeffs[0]
            shape = first.shape
        if coeffs:
            if domain is not None:
                dms = [D.to_dm(c, domain) for c in coeffs]
                K = D.unify(*[d.domain for d in dms])
                dms = [d.convert_to(K) if d.domain != K else d for d in dms]
            else:
                dms = D.common(coeffs)
                K = dms[0].domain
        else:
            K = domain if domain is not None else D.domain_for([])
            dms = []
        if k_max is not None:
            dms = dms[: max(0, k_max - low + 1)]
        lead = 0
        while lead < len(dms) and _is_zero_dm(dms[lead]):
            lead += 1
        if lead == len(dms):
            dms = []
            if k_max is not None:
                low = min(low, k_max + 1)
        else:
            dms = dms[lead:]
            low += lead
            end = len(dms)
            while end > 1 and _is_zero_dm(dms[end - 1]):
                end -= 1
            dms = dms[:end]
        self.low = low
        self._c = tuple(dms)
        self.k_max = k_max
        self.center = sp.sympify(center)
        self.shape = tuple(shape)
        self.domain = K
        self._sym = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: Mapping[int, object], k_max: int | None = None, center=0):
        terms = {k: (v if isinstance(v, DomainMatrix) else sp.Matrix(v)) for k, v in terms.items()}
        if not terms:
            raise ValueError("at least one coefficient is required")
        shape = next(iter(terms.values())).shape
        low, high = min(terms), max(terms)
        coeffs = [terms.get(k, sp.zeros(*shape)) for k in range(low, high + 1)]
        return cls(low, coeffs, k_max, center, shape)

    @classmethod
    def constant(cls, m, center=0):
        return cls(0, [m], None, center)

    @classmethod
    def identity(cls, n: int, center=0):
        return cls.constant(sp.eye(n), center)

    @classmethod
    def monomial(cls, m, power: int, center=0):
        return cls(power, [m], None, center)

    @classmethod
    def from_rational_entries(cls, entries, center, order: int, var=None):
        """Expand a matrix of exact rational functions (sympy expressions in ``var``)."""
        var = var if var is not None else sp.Symbol("x")
        m = sp.Matrix(entries)
        expansions = {}
        low = None
        for (i, j), e in _items(m):
            if is_zero(e):
                continue
            r = RationalFunction.from_expr(e, var)
            lo, cs = laurent_coefficients(r, center, order)
            expansions[(i, j)] = (lo, cs)
            low = lo if low is None else min(low, lo)
        if low is None:
            return cls(0, [], order, center, m.shape)
        coeffs = [sp.zeros(*m.shape) for _ in range(order - low + 1)]
        for (i, j), (lo, cs) in expansions.items():
            for idx, c in enumerate(cs):
                coeffs[lo + idx - low][i, j] = c
        return cls(low, coeffs, order, center, m.shape)

    # access -----------------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        if self._sym is None:
            self._sym = tuple(D.to_sympy(c) for c in self._c)
        return self._sym

    @property
    def n(self) -> int:
        return self.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.k_max is None

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def high(self) -> int:
        """Highest stored order."""
        return self.low + len(self._c) - 1

    @property
    def known_through(self):
        return _INF if self.k_max is None else self.k_max

    def _require(self, k: int):
        if self.k_max is not None and k > self.k_max:
            raise TruncationTooShort(f"order {k} requested, series known through {self.k_max}")

    def dcoeff(self, k: int) -> DomainMatrix:
        """Coefficient of order ``k`` as a DomainMatrix over :attr:`domain`."""
        self._require(k)
        idx = k - self.low
        if idx < 0 or idx >= len(self._c):
            return D.zeros(self.shape, self.domain)
        return self._c[idx]

    def coeff(self, k: int) -> sp.ImmutableMatrix:
        self._require(k)
        idx = k - self.low
        if idx < 0 or idx >= len(self._c):
            return sp.ImmutableMatrix(sp.zeros(*self.shape))
        return self.coeffs[idx]

    def terms(self):
        return {self.low + i: c for i, c in enumerate(self.coeffs)}

    def leading_order(self) -> int:
        if self.is_zero:
            raise ValueError("zero series has no leading order")
        return self.low

    def _raw(self, k, K):
        idx = k - self.low
        if idx < 0 or idx >= len(self._c):
            return D.zeros(self.shape, K)
        c = self._c[idx]
        return c if c.domain == K else c.convert_to(K)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "LaurentMatrix"):
        if self.center != other.center and not is_zero(self.center - other.center):
            raise ValueError("series are centered at different points")

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        K = D.unify(self.domain, other.domain)
        k_max = _min_known(self.k_max, other.k_max)
        if self.is_zero and other.is_zero:
            return LaurentMatrix(0, [], k_max, self.center, self.shape, K)
        lows = [s.low for s in (self, other) if not s.is_zero]
        highs = [s.high for s in (self, other) if not s.is_zero]
        low, top = min(lows), max(highs)
        if k_max is not None:
            top = min(top, k_max)
        coeffs = [self._raw(k, K) + other._raw(k, K) for k in range(low, top + 1)]
        return LaurentMatrix(low, coeffs, k_max, self.center, self.shape, K)

    def __neg__(self):
        return LaurentMatrix(self.low, [-c for c in self._c], self.k_max, self.center,
                             self.shape, self.domain)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentMatrix":
        K, s = D.scalar(c, self.domain)
        dms = [(m.convert_to(K) if m.domain != K else m) * s for m in self._c]
        return LaurentMatrix(self.low, dms, self.k_max, self.center, self.shape, K)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        shape = (self.shape[0], other.shape[1])
        K = D.unify(self.domain, other.domain)
        lo_s = self.low if not self.is_zero else 0
        lo_o = other.low if not other.is_zero else 0
        k_max = _min_known(
            None if self.k_max is None else self.k_max + lo_o,
            None if other.k_max is None else other.k_max + lo_s,
        )
        if self.is_zero or other.is_zero:
            return LaurentMatrix(0, [], k_max, self.center, shape, K)
        a = [c if c.domain == K else c.convert_to(K) for c in self._c]
        b = [c if c.domain == K else c.convert_to(K) for c in other._c]
        low = self.low + other.low
        top = self.high + other.high
        if k_max is not None:
            top = min(top, k_max)
        coeffs = []
        for k in range(low, top + 1):
            acc = None
            for i in range(max(self.low, k - other.high), min(self.high, k - other.low) + 1):
                term = a[i - self.low] * b[k - i - other.low]
                acc = term if acc is None else acc + term
            coeffs.append(acc if acc is not None else D.zeros(shape, K))
        return LaurentMatrix(low, coeffs, k_max, self.center, shape, K)

    def shift(self, j: int) -> "LaurentMatrix":
        """Multiply by ``(x - x0)^j``."""
        k_max = None if self.k_max is None else self.k_max + j
        return LaurentMatrix(self.low + j, self._c, k_max, self.center, self.shape, self.domain)

    def derivative(self) -> "LaurentMatrix":
        k_max = None if self.k_max is None else self.k_max - 1
        if self.is_zero:
            return LaurentMatrix(0, [], k_max, self.center, self.shape, self.domain)
        K = self.domain
        coeffs = [c * K.convert(self.low + i) for i, c in enumerate(self._c)]
        return LaurentMatrix(self.low - 1, coeffs, k_max, self.center, self.shape, K)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.low, [c.transpose() for c in self._c], self.k_max, self.center,
                             (self.shape[1], self.shape[0]), self.domain)

    def truncate(self, k_max: int) -> "LaurentMatrix":
        if self.k_max is not None and k_max > self.k_max:
            raise TruncationTooShort(f"cannot extend precision from {self.k_max} to {k_max}")
        return LaurentMatrix(self.low, self._c, k_max, self.center, self.shape, self.domain)

    def conjugate_by(self, T) -> "LaurentMatrix":
        """``T^{-1} A T`` for a constant invertible ``T``."""
        Td = D.to_dm(T)
        K = D.unify(self.domain, Td.domain)
        Td = Td.convert_to(K)
        Ti = Td.inv()
        dms = [Ti * c.convert_to(K) * Td for c in self._c]
        return LaurentMatrix(self.low, dms, self.k_max, self.center, self.shape, K)

    def equals(self, other: "LaurentMatrix", through: int | None = None) -> bool:
        """Coefficient equality through order ``through`` (default: common precision)."""
        diff = self - other
        if through is None:
            through = diff.k_max
            if through is None:
                return diff.is_zero
        if diff.is_zero:
            return diff.known_through >= through
        return diff.low > through and diff.known_through >= through

    # inversion --------------------------------------------------------------

    def inverse(self, order: int | None = None) -> "LaurentMatrix":
        """Matrix inverse as a Laurent series known through ``order``.

        With ``order=None`` the inverse must terminate (constant-monomial
        determinant); otherwise it is truncated at ``order``.
        """
        if self.shape[0] != self.shape[1]:
            raise ValueError("only square series can be inverted")
        if self.is_zero:
            raise ZeroDivisionError("zero series")
        if order is None:
            return self._terminating_inverse()
        g0 = self._c[0]
        if g0.det() != self.domain.zero:
            return self._newton_inverse(order)
        return self._adjugate_inverse(order)

    def _poly_matrix(self, t, count=None):
        n = self.n
        cs = self.coeffs if count is None else self.coeffs[:count]
        P = sp.zeros(n, n)
        for i, c in enumerate(cs):
            P += sp.Matrix(c) * t**i
        return P.applyfunc(sp.expand)

    def _terminating_inverse(self) -> "LaurentMatrix":
        if not self.is_exact:
            raise ValueError("an order is required for truncated series")
        n = self.n
        t = sp.Symbol("_t")
        P = self._poly_matrix(t)
        det = sp.Poly(sp.expand(P.det()), t)
        if det.is_zero or len(det.terms()) != 1:
            raise ValueError("inverse does not terminate; pass an order")
        (v,), dc = det.terms()[0]
        adj = P.adjugate()
        terms: dict[int, sp.Matrix] = {}
        for (i, j), e in _items(adj):
            for (p,), c in sp.Poly(sp.expand(e), t).terms():
                terms.setdefault(p, sp.zeros(n, n))[i, j] += c / dc
        shifted = {p - v - self.low: m for p, m in terms.items()}
        return LaurentMatrix.from_dict(shifted, None, self.center)

    def _newton_inverse(self, order: int) -> "LaurentMatrix":
        g = self._c
        h0 = g[0].inv()
        low = -self.low
        count = order - low + 1
        if self.k_max is not None:
            available = self.k_max - self.low + 1
            if count > available:
                raise TruncationTooShort(
                    f"inverse through {order} needs {count} terms, have {available}")
        hs = [h0]
        for k in range(1, max(count, 1)):
            acc = None
            for j in range(1, min(k, len(g) - 1) + 1):
                term = g[j] * hs[k - j]
                acc = term if acc is None else acc + term
            hs.append(-(h0 * acc) if acc is not None else D.zeros(self.shape, self.domain))
        return LaurentMatrix(low, hs[: max(count, 0)], order, self.center, self.shape, self.domain)

    def _adjugate_inverse(self, order: int) -> "LaurentMatrix":
        n = self.n
        t = sp.Symbol("_t")
        span = len(self._c) if self.k_max is None else self.k_max - self.low + 1
        P = self._poly_matrix(t, span)
        detp = sp.Poly(sp.expand(P.det()), t)
        if detp.is_zero:
            raise ZeroDivisionError("determinant vanishes identically to the known order")
        v = min(p for (p,), _ in detp.terms())
        # relative precision drops by the valuation of det
        rel_known = None if self.k_max is None else span - 1 - v
        low = -self.low - v
        count = order - low + 1
        if rel_known is not None and count - 1 > rel_known:
            raise TruncationTooShort(f"inverse through {order} exceeds known precision")
        dcoef = [detp.coeff_monomial(t ** (v + i)) for i in range(count)]
        adj = P.adjugate()
        acoef = [sp.zeros(n, n) for _ in range(count)]
        for (i, j), e in _items(adj):
            for (p,), c in sp.Poly(sp.expand(e), t).terms():
                if p < count:
                    acoef[p][i, j] += c
        inv = []
        for k in range(count):
            acc = sp.Matrix(acoef[k])
            for j in range(1, k + 1):
                acc -= dcoef[j] * inv[k - j]
            inv.append((acc / dcoef[0]).applyfunc(sp.expand))
        return LaurentMatrix(low, inv, order, self.center, self.shape)

    def __repr__(self) -> str:
        known = "exact" if self.k_max is None else f"k_max={self.k_max}"
        return f"LaurentMatrix(low={self.low}, {len(self._c)} terms, {known}, center={self.center})"


LaurentMatrixFunction = LaurentMatrix


def _items(m: sp.MatrixBase):
    for i in range(m.rows):
        for j in range(m.cols):
            yield (i, j), m[i, j]


# ---------------------------------------------------------------------------
# gauge transforms


@dataclass(frozen=True)
class GaugeTransform:
    """``W = F Y``; ``F`` is a matrix Laurent polynomial with nonvanishing determinant off x0."""

    F: LaurentMatrix

    @classmethod
    def diagonal_monomials(cls, powers, center=0):
        """``diag((x-x0)^{p_1}, ..., (x-x0)^{p_n})``."""
        terms: dict[int, sp.Matrix] = {}
        n = len(powers)
        for i, p in enumerate(powers):
            terms.setdefault(p, sp.zeros(n, n))[i, i] = 1
        return cls(LaurentMatrix.from_dict(terms, None, center))

    @classmethod
    def constant(cls, T, center=0):
        return cls(LaurentMatrix.constant(T, center))

    def inverse_series(self, order: int | None = None) -> LaurentMatrix:
        try:
            return self.F.inverse()
        except ValueError:
            if order is None:
                raise
            return self.F.inverse(order)

    def compose(self, other: "GaugeTransform") -> "GaugeTransform":
        """The gauge ``F_self F_other`` (apply ``self`` first, then ``other``)."""
        return GaugeTransform(self.F @ other.F)


def gauge_transform(A: LaurentMatrix, F: GaugeTransform, order: int | None = None) -> LaurentMatrix:
    """``B = F^{-1} A F - F^{-1} F'`` for ``W = F Y``."""
    Fs = F.F
    try:
        Finv = Fs.inverse()
    except ValueError:
        target = order if order is not None else A.k_max
        if target is None:
            raise ValueError("non-terminating gauge inverse needs an order") from None
        Finv = Fs.inverse(target - A.low - Fs.low + 2)
    B = Finv @ A @ Fs - Finv @ Fs.derivative()
    if order is not None:
        if B.k_max is not None and B.k_max < order:
            raise TruncationTooShort(f"gauge result known through {B.k_max} < {order}")
        B = B.truncate(order)
    return B
