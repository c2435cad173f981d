"""Systems with a spectral parameter and 2x2 canonical systems.

``W' = (P(x) + rho Q(x)) W`` can only be strong regular for every ``rho`` if
the residue pencil ``p_{-1} + rho q_{-1}`` has an integer, rho-free spectrum.
For the canonical system ``W' = rho [[0, r^-2], [r^2, 0]] W`` the point-wise
conditions on ``r`` at its simple zeros and poles are checked here, exactly
for rational ``r`` and to a relative tolerance for callables.

Convention: the parameter ``rho`` of the canonical system absorbs the factor
``i`` that appears when the same system is written as ``W' = i rho J H W``.
"""

from __future__ import annotations

import cmath
import functools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from .errors import ExpansionUnavailable, NonSimpleRoot, PatternMismatch, UnsupportedPoleOrder
from .exact.algebra import integer_spectrum, is_zero, numeric_spectrum
from .exact.ratfunc import X, RationalFunction, polynomial_roots, ratfunc_roots_poles
from .singular.classify import Verdict, strong_regularity_classify
from .singular.laurent import LaurentMatrix

RHO = sp.Symbol("rho")


# ---------------------------------------------------------------------------
# pencils


@dataclass(frozen=True)
class MatrixPencil:
    """Laurent coefficients of ``P(x) + rho Q(x)``: ``p[k]``, ``q[k]`` for ``k >= -1``."""

    p: dict
    q: dict

    def __post_init__(self):
        shapes = {sp.Matrix(m).shape for m in list(self.p.values()) + list(self.q.values())}
        if len(shapes) != 1:
            raise ValueError("inconsistent coefficient dimensions")

    @property
    def n(self) -> int:
        return sp.Matrix(next(iter({**self.p, **self.q}.values()))).rows

    def _get(self, d, k):
        return sp.Matrix(d[k]) if k in d else sp.zeros(self.n, self.n)

    def residue(self, rho=RHO) -> sp.Matrix:
        return (self._get(self.p, -1) + rho * self._get(self.q, -1)).expand()

    def at(self, rho) -> LaurentMatrix:
        """The coefficient series for a fixed ``rho``."""
        keys = sorted(set(self.p) | set(self.q))
        terms = {k: (self._get(self.p, k) + rho * self._get(self.q, k)).expand() for k in keys}
        return LaurentMatrix.from_dict(terms)

    def conjugate(self, T) -> "MatrixPencil":
        T = sp.Matrix(T)
        Ti = T.inv()
        return MatrixPencil({k: Ti * sp.Matrix(v) * T for k, v in self.p.items()},
                            {k: Ti * sp.Matrix(v) * T for k, v in self.q.items()})


@dataclass(frozen=True)
class PencilReport:
    passes: bool
    spectrum: tuple
    rho_free: bool
    all_integer: bool
    method: str


def _is_exact_matrix(m: sp.Matrix) -> bool:
    return all(not e.has(sp.Float) for e in m)


def pencil_integer_check(pencil: MatrixPencil, rho_samples: Sequence | None = None) -> PencilReport:
    """Integer and rho-independent spectrum of ``p_{-1} + rho q_{-1}``.

    Exact entries are decided symbolically (characteristic polynomial
    coefficients must be free of ``rho``); otherwise at least three samples are
    compared numerically.
    """
    R = pencil.residue(RHO)
    if _is_exact_matrix(R) and rho_samples is None:
        cp = sp.Poly(sp.expand(R.charpoly(sp.Symbol("lambda")).as_expr()), sp.Symbol("lambda"))
        rho_free = all(not sp.expand(c).has(RHO) for c in cp.all_coeffs())
        spec = integer_spectrum(pencil.residue(0))
        ok = rho_free and spec.all_integer
        return PencilReport(ok, spec.eigenvalues, rho_free, spec.all_integer, "symbolic")
    samples = list(rho_samples) if rho_samples is not None else [0.5, 1.0 + 1.0j, -2.0 + 0.25j]
    if len({complex(s) for s in samples}) < 3:
        raise ValueError("at least three distinct rho samples are required")
    coeffs = []
    spectra = []
    for s in samples:
        M = np.array(R.subs(RHO, s).evalf(), dtype=complex)
        coeffs.append(np.poly(M))
        spectra.append(numeric_spectrum(M))
    scale = max(1.0, max(np.abs(c).max() for c in coeffs))
    rho_free = all(np.allclose(c, coeffs[0], atol=1e-10 * scale, rtol=0) for c in coeffs)
    ints = all(abs(ev - round(ev.real)) <= 1e-10 * max(1, abs(ev)) for sp_ in spectra for ev, _ in sp_)
    return PencilReport(rho_free and ints, tuple(spectra[0]), rho_free, ints, "sampled")


# ---------------------------------------------------------------------------
# meromorphic handles


SeriesProvider = Callable[[object, int], tuple]  # (x0, order) -> (low, exact coefficients of r)


@dataclass(frozen=True)
class MeromorphicHandle:
    """A function ``r`` with declared simple zeros ``roots`` and poles ``poles``.

    Either ``rational`` is set, or ``func`` returns ``r(z)`` (or the triple
    ``(r, r', r'')``).  ``series`` optionally supplies exact Laurent
    coefficients of ``r`` at a declared point.
    """

    roots: tuple
    poles: tuple
    rational: RationalFunction | None = None
    func: Callable | None = None
    reciprocal: Callable | None = None
    series: SeriesProvider | None = None
    name: str = "r"
    multiplicities: dict = field(default_factory=dict)

    @classmethod
    def from_rational(cls, r, name: str = "r") -> "MeromorphicHandle":
        if not isinstance(r, RationalFunction):
            r = RationalFunction.from_expr(r)
        rp = ratfunc_roots_poles(r)
        mult = {("root", str(loc)): m for loc, m in rp.zeros}
        mult.update({("pole", str(loc)): m for loc, m in rp.poles})
        return cls(tuple(loc for loc, _ in rp.zeros), tuple(loc for loc, _ in rp.poles),
                   rational=r, name=name, multiplicities=mult)

    @classmethod
    def from_callable(cls, func, roots, poles, reciprocal=None, series=None, name="r",
                      tol: float = 1e-10) -> "MeromorphicHandle":
        h = cls(tuple(roots), tuple(poles), None, func, reciprocal, series, name)
        for x in h.roots:
            v, d1, _ = h.derivatives(x)
            if abs(v) > tol * max(1.0, abs(d1)):
                raise ValueError(f"declared root {x} of {name}: |r| = {abs(v):.3e}")
        for y in h.poles:
            v, d1, _ = h.reciprocal_derivatives(y)
            if abs(v) > tol * max(1.0, abs(d1)):
                raise ValueError(f"declared pole {y} of {name}: |1/r| = {abs(v):.3e}")
        return h

    def _radius(self, z0: complex) -> float:
        others = [complex(sp.N(p)) for p in list(self.roots) + list(self.poles)]
        dist = [abs(o - z0) for o in others if abs(o - z0) > 1e-12]
        return 0.25 * min(dist) if dist else 0.25

    def derivatives(self, z0) -> tuple[complex, complex, complex]:
        z0 = complex(sp.N(z0))
        if self.rational is not None:
            r = self.rational
            return (complex(r.evaluate(z0)), complex(r.derivative().evaluate(z0)),
                    complex(r.derivative().derivative().evaluate(z0)))
        out = self.func(z0)
        if isinstance(out, tuple):
            return tuple(complex(v) for v in out)
        return cauchy_derivatives(self.func, z0, self._radius(z0))

    def reciprocal_derivatives(self, z0) -> tuple[complex, complex, complex]:
        z0 = complex(sp.N(z0))
        if self.rational is not None:
            q = 1 / self.rational
            return (complex(q.evaluate(z0)), complex(q.derivative().evaluate(z0)),
                    complex(q.derivative().derivative().evaluate(z0)))
        if self.reciprocal is not None:
            out = self.reciprocal(z0)
            if isinstance(out, tuple):
                return tuple(complex(v) for v in out)
            return cauchy_derivatives(self.reciprocal, z0, self._radius(z0))

        def q(z):
            v = self.func(z)
            return 1.0 / (v[0] if isinstance(v, tuple) else v)

        return cauchy_derivatives(q, z0, self._radius(z0))


def cauchy_derivatives(f, z0: complex, radius: float, n: int = 64) -> tuple[complex, complex, complex]:
    """``f, f', f''`` at ``z0`` from the trapezoid rule on a circle (exponentially accurate)."""
    theta = 2 * np.pi * np.arange(n) / n
    w = np.exp(1j * theta)
    vals = np.array([complex(_first(f(z0 + radius * wk))) for wk in w])
    c = [np.mean(vals * w ** (-k)) / radius**k for k in range(3)]
    return c[0], c[1], 2 * c[2]


def _first(v):
    return v[0] if isinstance(v, tuple) else v


def tangent_handle(kmax: int = 3) -> MeromorphicHandle:
    """``r = tan x`` with zeros ``k pi`` and poles ``l pi + pi/2`` for ``|k|, |l| <= kmax``."""
    roots = tuple(k * sp.pi for k in range(-kmax, kmax + 1))
    poles = tuple(l * sp.pi + sp.pi / 2 for l in range(-kmax, kmax + 1))

    def func(z):
        t = cmath.tan(z)
        s2 = 1 + t * t
        return t, s2, 2 * s2 * t

    def recip(z):
        c = 1 / cmath.tan(z)
        s2 = 1 + c * c
        return c, -s2, 2 * s2 * c

    def series(x0, order):
        # tan is pi-periodic; near k pi it is tan u, near k pi + pi/2 it is -cot u
        frac = sp.Rational(round(float(sp.N(2 * x0 / sp.pi, 30)))) / 2
        if not is_zero(frac - 2 * x0 / sp.pi / 2) or frac.q not in (1, 2):
            raise ExpansionUnavailable(f"{x0} is neither a zero nor a pole of tan")
        return _tan_series("tan" if frac.q == 1 else "-cot", order)

    return MeromorphicHandle(roots, poles, None, func, recip, series, "tan")


@functools.lru_cache(maxsize=None)
def _tan_series(kind: str, order: int) -> tuple:
    u = sp.Symbol("u")
    f = sp.tan(u) if kind == "tan" else -sp.cot(u)
    poly = sp.Poly(sp.expand(sp.series(f, u, 0, order + 1).removeO() * u), u)
    coeffs = {m - 1: c for (m,), c in poly.terms()}
    low = min(coeffs)
    return low, tuple(coeffs.get(k, sp.Integer(0)) for k in range(low, order + 1))


def _series_mul(a: tuple, b: tuple, count: int) -> tuple:
    (la, ca), (lb, cb) = a, b
    out = []
    for k in range(count):
        out.append(sum((ca[i] * cb[k - i] for i in range(k + 1) if i < len(ca) and k - i < len(cb)),
                       sp.Integer(0)))
    return la + lb, out


def _series_inv(a: tuple, count: int) -> tuple:
    la, ca = a
    inv = [1 / ca[0]]
    for k in range(1, count):
        acc = sum((ca[j] * inv[k - j] for j in range(1, min(k, len(ca) - 1) + 1)), sp.Integer(0))
        inv.append(sp.expand(-acc / ca[0]))
    return -la, inv


# ---------------------------------------------------------------------------
# condition on r


@dataclass(frozen=True)
class PointDiagnostic:
    kind: str  # "root" of r or "pole" of r (root of q = 1/r)
    location: object
    multiplicity: int
    value: complex
    first: complex
    second: complex
    ok: bool


@dataclass(frozen=True)
class RConditionReport:
    passes: bool
    points: tuple
    all_simple: bool


def r_condition_check(r: MeromorphicHandle, strict: bool = False, rtol: float = 1e-9) -> RConditionReport:
    """At each simple zero: ``r' != 0`` and ``r'' = 0``; at each simple pole the same for ``1/r``.

    Multiple zeros or poles raise :class:`NonSimpleRoot` when ``strict``;
    otherwise they are reported and the check fails.
    """
    if r.rational is not None:
        return _rational_condition(r, strict)
    points = []
    for kind, locs, fn in (("root", r.roots, r.derivatives), ("pole", r.poles, r.reciprocal_derivatives)):
        for loc in locs:
            v, d1, d2 = fn(loc)
            scale = max(1.0, abs(d1))
            simple = abs(d1) > rtol * max(1.0, abs(v))
            if not simple and strict:
                raise NonSimpleRoot(f"{kind} {loc} is not simple")
            ok = simple and abs(v) <= rtol * scale and abs(d2) <= rtol * scale
            points.append(PointDiagnostic(kind, loc, 1 if simple else 2, v, d1, d2, ok))
    all_simple = all(p.multiplicity == 1 for p in points)
    return RConditionReport(all(p.ok for p in points), tuple(points), all_simple)


def _rational_condition(h: MeromorphicHandle, strict: bool) -> RConditionReport:
    r = h.rational
    points = []
    for kind, f in (("root", r), ("pole", 1 / r)):
        second = f.derivative().derivative()
        first = f.derivative()
        # irreducible factors: conjugate roots share the verdict, distinct factors need not
        _, factors = f.num.factor_list()
        for factor, mult in factors:
            if mult > 1 and strict:
                raise NonSimpleRoot(f"{kind} of multiplicity {mult} at the zeros of {factor.as_expr()}")
            # f'' vanishes at every zero of the factor iff the factor divides its numerator
            vanishes = second.num.rem(factor).is_zero
            nonzero_first = mult == 1 and first.num.gcd(factor).degree() == 0
            ok = mult == 1 and vanishes and nonzero_first
            for loc, m in polynomial_roots(factor):
                points.append(PointDiagnostic(
                    kind, loc, mult * m, _exact_or_complex(f, loc),
                    _exact_or_complex(first, loc), _exact_or_complex(second, loc), ok))
    all_simple = all(p.multiplicity == 1 for p in points)
    return RConditionReport(all(p.ok for p in points), tuple(points), all_simple)


def _exact_or_complex(f: RationalFunction, loc):
    if isinstance(loc, sp.Basic) and loc.is_Rational:
        return f(loc)
    return complex(f.evaluate(complex(sp.N(loc, 30))))


# ---------------------------------------------------------------------------
# canonical systems


DEFAULT_ORDER = 16


def canonical_from_r(r: MeromorphicHandle, x0, rho=1, order: int = DEFAULT_ORDER) -> LaurentMatrix:
    """Laurent expansion of ``rho [[0, r^-2], [r^2, 0]]`` at a declared zero or pole ``x0``."""
    declared = list(r.roots) + list(r.poles)
    if not any(_same_point(x0, d) for d in declared):
        raise ExpansionUnavailable(f"{x0} is not a declared zero or pole of {r.name}")
    rho = sp.sympify(rho)
    if r.rational is not None:
        e = r.rational.as_expr()
        A = LaurentMatrix.from_rational_entries([[0, 1 / e**2], [e**2, 0]], x0, order, X)
        return A.scale(rho)
    if r.series is None:
        raise ExpansionUnavailable(f"{r.name} has no series data at {x0}")
    low, cs = r.series(x0, order + 4)
    ser = (low, list(cs))
    count = order + 4 - low + 1
    sq = _series_mul(ser, ser, count)
    isq = _series_inv(sq, count)
    entries = {}
    for (i, j), (lo, c) in (((0, 1), isq), ((1, 0), sq)):
        for idx, v in enumerate(c):
            k = lo + idx
            if k <= order and not is_zero(v):
                entries.setdefault(k, sp.zeros(2, 2))[i, j] = rho * v
    k_max = min(order, sq[0] + count - 1, isq[0] + count - 1)
    return LaurentMatrix.from_dict(entries, k_max, x0)


def _same_point(a, b) -> bool:
    try:
        return is_zero(sp.sympify(a) - sp.sympify(b))
    except (TypeError, sp.SympifyError):
        return abs(complex(a) - complex(sp.N(b))) < 1e-12


@dataclass(frozen=True)
class CrossCheck:
    location: object
    rho: object
    condition_ok: bool
    verdict: str
    consistent: bool


def classify_canonical(r: MeromorphicHandle, x0, rho, order: int = DEFAULT_ORDER) -> str:
    """Verdict string; deep or unsupported poles count as rejections."""
    try:
        rep = strong_regularity_classify(canonical_from_r(r, x0, rho, order))
    except (UnsupportedPoleOrder, PatternMismatch) as exc:
        return f"Rejected({type(exc).__name__})"
    return rep.verdict.value


def theorem_consistency(r: MeromorphicHandle, rhos=(1, sp.I, 2 - 3 * sp.I),
                        order: int = DEFAULT_ORDER) -> list[CrossCheck]:
    """Point-wise agreement between the condition on ``r`` and the classifier."""
    report = r_condition_check(r)
    out = []
    for pt in report.points:
        for rho in rhos:
            verdict = classify_canonical(r, pt.location, rho, order)
            sr = verdict == Verdict.STRONG_REGULAR.value
            out.append(CrossCheck(pt.location, rho, pt.ok, verdict, sr == pt.ok))
    return out
