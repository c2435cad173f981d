"""Exact rational functions of one variable.

A :class:`RationalFunction` stores a numerator and a monic denominator as
:class:`sympy.Poly` objects with their gcd removed, so two equal functions have
identical representations.  Coefficients may live in a small algebraic
extension of the rationals (Gaussian rationals, square roots).
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
import sympy as sp

from .algebra import is_zero

X = sp.Symbol("x")
_T = sp.Symbol("t")


def _poly(value, var) -> sp.Poly:
    if isinstance(value, sp.Poly):
        if value.gens != (var,):
            value = sp.Poly(value.as_expr(), var, extension=True)
        return value
    expr = sp.expand(sp.sympify(value, rational=True))
    return sp.Poly(expr, var, extension=True)


def _unify(p: sp.Poly, q: sp.Poly):
    if p.domain != q.domain:
        dom = p.domain.unify(q.domain)
        p, q = p.set_domain(dom), q.set_domain(dom)
    return p, q


class RationalFunction:
    """``num / den`` in lowest terms with a monic denominator."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=1, var: sp.Symbol = X):
        p, q = _unify(_poly(num, var), _poly(den, var))
        if not p.domain.is_Field:
            p, q = p.to_field(), q.to_field()
        if q.is_zero:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if p.is_zero:
            p, q = p.zero, q.one
        else:
            g = p.gcd(q)
            if g.degree() > 0:
                p, q = p.exquo(g), q.exquo(g)
            lc = q.LC()
            p, q = p.quo_ground(lc), q.monic()
        self.num = p
        self.den = q
        self.var = var

    # construction -----------------------------------------------------------

    @classmethod
    def from_expr(cls, expr, var: sp.Symbol = X) -> "RationalFunction":
        n, d = sp.fraction(sp.together(sp.sympify(expr, rational=True)))
        return cls(n, d, var)

    @classmethod
    def constant(cls, c, var: sp.Symbol = X) -> "RationalFunction":
        return cls(c, 1, var)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.var != self.var:
                raise ValueError("variables differ")
            return other
        return RationalFunction(other, 1, self.var)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num, self.var)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k), self.var)
        return RationalFunction(self.num**k, self.den**k, self.var)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (ValueError, sp.SympifyError, TypeError):
            return NotImplemented
        return (self.num - o.num).is_zero and (self.den - o.den).is_zero

    def __hash__(self):
        return hash((str(self.num.as_expr()), str(self.den.as_expr())))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num.as_expr()}, {self.den.as_expr()})"

    # calculus and composition ----------------------------------------------

    def derivative(self) -> "RationalFunction":
        p, q = self.num, self.den
        return RationalFunction(p.diff() * q - p * q.diff(), q * q, self.var)

    def scale_argument(self, c) -> "RationalFunction":
        """The function ``x -> self(c x)``."""
        c = sp.sympify(c, rational=True)
        v = self.var
        return RationalFunction(
            sp.expand(self.num.as_expr().subs(v, c * v)),
            sp.expand(self.den.as_expr().subs(v, c * v)),
            v,
        )

    # evaluation -------------------------------------------------------------

    def as_expr(self) -> sp.Expr:
        return self.num.as_expr() / self.den.as_expr()

    def __call__(self, value):
        """Exact value at an exact point."""
        v = sp.sympify(value, rational=True)
        d = sp.expand(self.den.as_expr().subs(self.var, v))
        if is_zero(d):
            raise ZeroDivisionError(f"pole at {value}")
        n = sp.expand(self.num.as_expr().subs(self.var, v))
        return sp.radsimp(n / d)

    def evaluate(self, z):
        """Complex floating value (vectorized over numpy arrays)."""
        z = np.asarray(z, dtype=complex)
        return np.polyval(_complex_coeffs(self.num), z) / np.polyval(_complex_coeffs(self.den), z)

    # inspection -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def coefficients(self) -> tuple[list, list]:
        """Ascending-power coefficient lists of numerator and denominator."""
        return _ascending(self.num), _ascending(self.den)


def _ascending(p: sp.Poly) -> list:
    if p.is_zero:
        return [sp.Integer(0)]
    return [sp.expand(c) for c in reversed(p.all_coeffs())]


def _complex_coeffs(p: sp.Poly) -> np.ndarray:
    return np.array([complex(sp.N(c, 30)) for c in p.all_coeffs()], dtype=complex)


# ---------------------------------------------------------------------------
# roots and poles


@dataclass(frozen=True)
class RootsPoles:
    """Zeros and poles as ``(location, multiplicity)``.

    Locations are sympy numbers when found in closed form, else complex floats
    certified by a residual check.
    """

    zeros: tuple
    poles: tuple

    def locations(self, which: str = "zeros") -> list[complex]:
        return [complex(sp.N(loc)) for loc, _ in getattr(self, which)]


def _certified_numeric_roots(g: sp.Poly) -> list[complex]:
    coeffs = [complex(sp.N(c, 40)) for c in g.all_coeffs()]
    with mpmath.workdps(40):
        roots = mpmath.polyroots([mpmath.mpc(c) for c in coeffs], maxsteps=400, extraprec=200)
    out = []
    for r in roots:
        z = complex(r)
        scale = sum(abs(c) * abs(z) ** k for k, c in enumerate(reversed(coeffs)))
        resid = abs(np.polyval(np.array(coeffs), z))
        if resid > 1e-12 * max(scale, 1.0):
            raise ArithmeticError(f"root {z} failed certification (residual {resid:.3e})")
        out.append(z)
    return out


def polynomial_roots(p: sp.Poly) -> list[tuple]:
    """Roots with multiplicities from a square-free then irreducible decomposition."""
    if p.degree() <= 0:
        return []
    out = []
    _, sqf = p.sqf_list()
    for f, mult in sqf:
        _, irreducibles = f.factor_list()
        for g, e in irreducibles:
            found = sp.roots(g, multiple=False) if g.degree() <= 6 else {}
            if sum(found.values()) == g.degree():
                out.extend((sp.expand(r), mult * e * m) for r, m in found.items())
            else:
                out.extend((z, mult * e) for z in _certified_numeric_roots(g))
    return sorted(out, key=lambda lm: _loc_key(lm[0]))


def _loc_key(loc):
    c = complex(sp.N(loc)) if isinstance(loc, sp.Basic) else complex(loc)
    return (round(c.real, 12), round(c.imag, 12))


def ratfunc_roots_poles(r: RationalFunction) -> RootsPoles:
    if r.is_zero:
        raise ValueError("the zero function has no isolated zeros")
    return RootsPoles(tuple(polynomial_roots(r.num)), tuple(polynomial_roots(r.den)))


# ---------------------------------------------------------------------------
# residues


@dataclass(frozen=True)
class FactorResidue:
    """Residue of a rational function at the roots of one irreducible factor.

    ``residue`` is a polynomial ``R`` of degree < deg(factor): at every root
    ``z`` of ``factor`` the residue equals ``R(z)``.  It is ``None`` for
    factors of multiplicity above one.
    """

    factor: sp.Poly
    multiplicity: int
    residue: sp.Poly | None

    @property
    def constant(self):
        """The residue when it does not depend on the root, else None."""
        if self.residue is None or self.residue.degree() > 0:
            return None
        return self.residue.as_expr()


def residues(r: RationalFunction, extension=None) -> list[FactorResidue]:
    """Exact residues at all poles, grouped by irreducible denominator factor."""
    den = r.den
    if extension is not None:
        den = sp.Poly(den.as_expr(), r.var, extension=extension)
    num = sp.Poly(r.num.as_expr(), r.var, domain=den.domain)
    dden = den.diff()
    out = []
    _, factors = den.factor_list()
    for f, mult in factors:
        if mult > 1:
            out.append(FactorResidue(f, mult, None))
            continue
        # for a simple factor f of den: Res = num / den' at each root of f
        inv = dden.rem(f).invert(f)
        out.append(FactorResidue(f, mult, (num * inv).rem(f)))
    return out


# ---------------------------------------------------------------------------
# local expansions


def laurent_coefficients(r: RationalFunction, x0, order: int) -> tuple[int, list]:
    """Exact Laurent coefficients of ``r`` at ``x0``: ``(low, [c_low, ..., c_{order}])``."""
    x0 = sp.sympify(x0, rational=True)
    shift = lambda p: [sp.expand(c) for c in reversed(
        sp.Poly(sp.expand(p.as_expr().subs(r.var, x0 + _T)), _T).all_coeffs())]
    a = shift(r.num)
    d = shift(r.den)
    va = next(i for i, c in enumerate(a) if not is_zero(c))
    vd = next(i for i, c in enumerate(d) if not is_zero(c))
    a, d = a[va:], d[vd:]
    low = va - vd
    n_terms = order - low + 1
    if n_terms <= 0:
        return low, []
    coeffs = []
    for k in range(n_terms):
        s = a[k] if k < len(a) else 0
        for j in range(1, min(k, len(d) - 1) + 1):
            s -= d[j] * coeffs[k - j]
        coeffs.append(sp.radsimp(sp.expand(s / d[0])))
    return low, coeffs
