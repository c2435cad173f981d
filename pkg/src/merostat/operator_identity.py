"""Canonical systems from even convolution kernels by the operator identity.

For ``S_xi f = f + int_0^xi k(x - t) f(t) dt`` with ``k`` even and real:

* ``M(x) = int_0^x k + 1/2``;
* ``h2(xi) = (S_xi^{-1} 1)(xi)``, ``h1 = 1 / (2 h2)``;
* ``H(xi) = (1/2) [[Q, 1], [1, 1/Q]]`` with ``1/Q = 2 h2^2``;
* ``r(x) = 1 / (sqrt 2 h2(2x))``, i.e. ``r^{-2}(x) = 2 h2(2x)^2``;
* ``W(xi, rho) = I + i rho J Pi* S_xi^{-1} (I - rho A)^{-1} Pi`` solves ``W' = i rho J H W``.

For a polynomial kernel ``k(x - t) = sum_s x^s p_s(t)``, everything is exact.
The Gram matrix is ``A_xi = [delta_js + (x^s, p_j)_xi]`` with ``Delta = det A_xi``,
and ``S_xi^{-1} = I + Gamma``.  Cramer's rule gives
``Gamma(x, t) = -(1/Delta) sum_s D_s(xi, t) x^s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import sympy as sp

from .errors import DegreeTooLarge, SingularOperator
from .exact.algebra import bareiss_determinant
from .exact.ratfunc import RationalFunction, polynomial_roots, ratfunc_roots_poles
from .fredholm.quadrature import gauss_legendre01
from .spectral import MeromorphicHandle

XI = sp.Symbol("xi")
T = sp.Symbol("t")
X = sp.Symbol("x")
MAX_DEGREE = 8


# ---------------------------------------------------------------------------
# kernel descriptions


@dataclass(frozen=True)
class ConvolutionKernelSpec:
    """``EvenPolynomial(coeffs)``, ``ExponentialPair(beta, lam)`` or ``Sinc(gamma)``.

    Polynomial coefficients are ascending (``coeffs[j]`` multiplies ``x^j``).
    Exponential pair: ``k(x) = beta (e^{i lam x} + e^{-i lam x}) = 2 beta cos(lam x)``.
    Sinc: ``k(x) = gamma sin(pi x) / (pi x)``.
    """

    kind: str
    coeffs: tuple = ()
    beta: float = 0.0
    lam: float = 1.0
    gamma: float = 0.0
    a: float = float("inf")

    @classmethod
    def polynomial(cls, coeffs, a=float("inf")):
        cs = tuple(sp.Rational(c) if not isinstance(c, sp.Basic) else sp.nsimplify(c) for c in coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        spec = cls("EvenPolynomial", cs or (sp.Integer(0),), a=a)
        if any(c != 0 for c in cs[1::2]):
            raise ValueError("an even kernel has no odd powers")
        if any(not c.is_real for c in cs):
            raise ValueError("kernel coefficients must be real")
        return spec

    @classmethod
    def exponential(cls, beta: float, lam: float, a=float("inf")):
        if beta == 0:
            raise ValueError("beta must be nonzero")
        if lam <= 0:
            raise ValueError("lambda must be positive")
        return cls("ExponentialPair", beta=float(beta), lam=float(lam), a=a)

    @classmethod
    def sinc(cls, gamma: float, a=float("inf")):
        return cls("Sinc", gamma=float(gamma), a=a)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def expr(self, var=X) -> sp.Expr:
        if self.kind == "EvenPolynomial":
            return sum(c * var**j for j, c in enumerate(self.coeffs))
        if self.kind == "ExponentialPair":
            return 2 * sp.nsimplify(self.beta) * sp.cos(sp.nsimplify(self.lam) * var)
        return sp.nsimplify(self.gamma) * sp.sinc(sp.pi * var)

    def numeric(self) -> Callable:
        """``k`` as a vectorized numpy callable."""
        if self.kind == "EvenPolynomial":
            c = np.array([complex(v) for v in self.coeffs])
            return lambda x: np.polynomial.polynomial.polyval(np.asarray(x), c).real \
                if np.isrealobj(x) else np.polynomial.polynomial.polyval(np.asarray(x), c)
        if self.kind == "ExponentialPair":
            b, lam = self.beta, self.lam
            return lambda x: 2 * b * np.cos(lam * np.asarray(x))
        g = self.gamma
        from .special import sinc

        return lambda x: g * sinc(np.asarray(x))


@dataclass(frozen=True)
class AccelerantSystem:
    """``M(x) = int_0^x k + 1/2``.  ``Phi_1`` multiplies by ``M`` and ``Phi_2`` by 1."""

    M: sp.Expr
    var: sp.Symbol = X

    @property
    def phi1(self) -> str:
        return "multiplication by M(x)"

    @property
    def phi2(self) -> str:
        return "multiplication by 1"

    def numeric(self) -> Callable:
        return sp.lambdify(self.var, self.M, modules=["numpy", {"Si": _si}])


def _si(x):
    from scipy.special import sici

    return sici(x)[0]


def m_function(k: ConvolutionKernelSpec) -> AccelerantSystem:
    u = sp.Symbol("u")
    if k.kind == "Sinc":
        M = sp.nsimplify(k.gamma) * sp.Si(sp.pi * X) / sp.pi + sp.Rational(1, 2)
    else:
        M = sp.integrate(k.expr(u), (u, 0, X)) + sp.Rational(1, 2)
    return AccelerantSystem(sp.simplify(M))


# ---------------------------------------------------------------------------
# exact resolvent for polynomial kernels


@dataclass(frozen=True)
class ResolventBundle:
    kernel: ConvolutionKernelSpec
    p: tuple  # p_s(t), s = 0..2m
    A: sp.Matrix  # Gram matrix in xi
    delta: sp.Poly
    d: tuple  # d_s(xi) for f = 1
    D: tuple  # D_s(xi, t)
    h2: RationalFunction
    gamma0: RationalFunction
    singular_points: tuple = field(default=())

    def resolvent_kernel(self) -> sp.Expr:
        """``Gamma_xi(x, t)`` as an exact expression in ``x, t, xi``."""
        num = sum(Ds.as_expr() * X**s for s, Ds in enumerate(self.D))
        return -num / self.delta.as_expr()


def _ps(coeffs) -> list[sp.Expr]:
    k = sum(c * X**j for j, c in enumerate(coeffs))
    poly = sp.Poly(sp.expand(k.subs(X, X - T)), X)
    deg = len(coeffs) - 1
    return [sp.expand(poly.coeff_monomial(X**s)) for s in range(deg + 1)]


def poly_kernel_resolvent(k: ConvolutionKernelSpec) -> ResolventBundle:
    """Exact ``Delta``, ``d_s``, ``D_s``, ``h2`` and ``Gamma_xi(0, xi)`` for an even polynomial kernel."""
    if k.kind != "EvenPolynomial":
        raise ValueError("poly_kernel_resolvent needs an EvenPolynomial kernel")
    if k.degree > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {k.degree} exceeds the exact-mode cap {MAX_DEGREE}")
    if all(c == 0 for c in k.coeffs):
        one = RationalFunction.constant(1, XI)
        zero = RationalFunction.constant(0, XI)
        delta = sp.Poly(1, XI, domain="QQ")
        return ResolventBundle(k, (), sp.Matrix(), delta, (), (), one, zero, ())
    p = _ps(k.coeffs)
    N = len(p)
    xs = sp.Symbol("s_")

    def ip(f, g):
        return sp.expand(sp.integrate(sp.expand(f * g), (xs, 0, XI)))

    A = sp.Matrix(N, N, lambda j, s: (1 if j == s else 0) + ip(xs**s, p[j].subs(T, xs)))
    dom = "QQ"
    rows = [[sp.Poly(A[j, s], XI, domain=dom) for s in range(N)] for j in range(N)]
    delta = bareiss_determinant(rows)
    f_col = [sp.Poly(ip(1, p[j].subs(T, xs)), XI, domain=dom) for j in range(N)]
    p_col = [sp.Poly(p[j], XI, T, domain=dom) for j in range(N)]
    rows2 = [[sp.Poly(A[j, s], XI, T, domain=dom) for s in range(N)] for j in range(N)]
    d, D = [], []
    for s in range(N):
        d.append(bareiss_determinant([[f_col[j] if c == s else rows[j][c] for c in range(N)]
                                      for j in range(N)]))
        D.append(bareiss_determinant([[p_col[j] if c == s else rows2[j][c] for c in range(N)]
                                      for j in range(N)]))
    # h2(xi) = g(xi, xi) with g = 1 - sum_s x^s d_s / Delta
    num = delta - sum((d[s] * sp.Poly(XI**s, XI, domain=dom) for s in range(N)), sp.Poly(0, XI, domain=dom))
    h2 = RationalFunction(num, delta, XI)
    D0 = sp.Poly(D[0].as_expr().subs(T, XI), XI, domain=dom)
    gamma0 = RationalFunction(-D0, delta, XI)
    sing = tuple(loc for loc, _ in polynomial_roots(delta)) if delta.degree() > 0 else ()
    return ResolventBundle(k, tuple(p), A, delta, tuple(d), tuple(D), h2, gamma0, sing)


def gamma_log_derivative_check(bundle: ResolventBundle) -> bool:
    """``h2' = Gamma_xi(0, xi) h2`` as an exact rational-function identity."""
    return bundle.h2.derivative() == bundle.gamma0 * bundle.h2


# ---------------------------------------------------------------------------
# exponential kernel


@dataclass(frozen=True)
class ExpKernelData:
    beta: float
    lam: float

    def u(self, x):
        return x + 1 / self.beta - np.sin(self.lam * x) / self.lam

    def v(self, x):
        return x + 1 / self.beta + np.sin(self.lam * x) / self.lam

    def h2(self, x):
        return self.u(x) / self.v(x)

    def T(self, xi):
        """The 2x2 matrix whose inverse gives ``S_xi^{-1}`` in closed form."""
        b, lam = self.beta, self.lam
        s = np.sin(lam * xi) / lam
        return np.array([[xi + 1 / b, np.exp(-1j * lam * xi) * s],
                         [np.exp(1j * lam * xi) * s, xi + 1 / b]])

    def h2_from_T(self, xi):
        """``h2(xi) = (S_xi^{-1} 1)(xi)`` from ``S^{-1} f = f - K T^{-1} int K* f``."""
        lam = self.lam
        Kx = np.array([np.exp(1j * lam * xi), np.exp(-1j * lam * xi)])
        # int_0^xi K*(t) dt with K* = conj(K)^T
        ints = np.array([(1 - np.exp(-1j * lam * xi)) / (1j * lam), (np.exp(1j * lam * xi) - 1) / (1j * lam)])
        return complex(1 - Kx @ np.linalg.solve(self.T(xi), ints)).real


def exp_kernel_h2(beta: float, lam: float) -> "HamiltonianH":
    """``h2 = u / v`` for ``k(x) = 2 beta cos(lam x)``."""
    if beta == 0:
        raise SingularOperator("beta must be nonzero")
    data = ExpKernelData(float(beta), float(lam))
    return hamiltonian_from_h2(data.h2, exp_data=data)


# ---------------------------------------------------------------------------
# Hamiltonian


@dataclass(frozen=True)
class HamiltonianH:
    h2: object  # RationalFunction or callable
    exact: bool
    exp_data: ExpKernelData | None = None

    def h1(self, xi=None):
        if self.exact:
            return 1 / (2 * self.h2)
        return 1 / (2 * self.h2(xi))

    def Q(self, xi=None):
        if self.exact:
            return 1 / (2 * self.h2 * self.h2)
        return 1 / (2 * self.h2(xi) ** 2)

    def H(self, xi):
        """``(1/2) [[Q, 1], [1, 1/Q]]`` at ``xi``; symbolic when exact and ``xi`` is a sympy object."""
        if self.exact:
            h = self.h2.as_expr().subs(self.h2.var, xi)
            return sp.Matrix([[1 / (4 * h**2), sp.Rational(1, 2)], [sp.Rational(1, 2), h**2]])
        h = self.h2(xi)
        return np.array([[1 / (4 * h * h), 0.5], [0.5, h * h]])

    def H_numeric(self, xi):
        h = complex(self.h2.evaluate(xi)) if self.exact else self.h2(xi)
        return np.array([[1 / (4 * h * h), 0.5], [0.5, h * h]])

    def r_function(self):
        """``r(x) = 1 / (sqrt 2 h2(2x))`` (exact when ``h2`` is rational)."""
        if self.exact:
            return 1 / (self.h2.scale_argument(2) * sp.sqrt(2))
        return lambda x: 1 / (np.sqrt(2) * self.h2(2 * x))

    def r_handle(self, box=(-6.0, 6.0, -6.0, 6.0)) -> MeromorphicHandle:
        """``r`` as a :class:`MeromorphicHandle` (rational, or with located zeros/poles in ``box``)."""
        if self.exact:
            return MeromorphicHandle.from_rational(self.r_function())
        if self.exp_data is None:
            raise ValueError("zeros and poles are only located for the exponential kernel")
        return _exp_r_handle(self.exp_data, box)


def hamiltonian_from_h2(h2, exp_data: ExpKernelData | None = None) -> HamiltonianH:
    if isinstance(h2, RationalFunction):
        if h2.is_zero:
            raise ValueError("h2 must not vanish identically")
        return HamiltonianH(h2, True)
    if isinstance(h2, sp.Basic):
        return hamiltonian_from_h2(RationalFunction.from_expr(h2, XI))
    return HamiltonianH(h2, False, exp_data)


def _exp_r_handle(data: ExpKernelData, box) -> MeromorphicHandle:
    """Zeros of ``v(2x)`` are the roots of ``r``; zeros of ``u(2x)`` its poles."""
    b, lam = data.beta, data.lam

    def newton(fn, dfn, z):
        with np.errstate(all="ignore"):
            for _ in range(60):
                step = fn(z) / dfn(z)
                if not np.isfinite(step):
                    return None
                z = z - step
                if abs(step) < 1e-15 * max(1.0, abs(z)):
                    return z
        return None

    def zeros(sign):
        fn = lambda z: 2 * z + 1 / b + sign * np.sin(2 * lam * z) / lam  # noqa: E731
        dfn = lambda z: 2 + sign * 2 * np.cos(2 * lam * z)  # noqa: E731
        found = []
        for xr in np.linspace(box[0], box[1], 25):
            for yi in np.linspace(box[2], box[3], 25):
                z = newton(fn, dfn, complex(xr, yi))
                if z is None or not (box[0] <= z.real <= box[1] and box[2] <= z.imag <= box[3]):
                    continue
                if abs(fn(z)) > 1e-10 * max(1.0, abs(z)) or any(abs(z - w) < 1e-8 for w in found):
                    continue
                found.append(complex(round(z.real, 14), round(z.imag, 14)))
        return found

    def r3(z):
        y = 2 * z
        s, c = np.sin(lam * y), np.cos(lam * y)
        u = y + 1 / b - s / lam
        v = y + 1 / b + s / lam
        du, dv = 2 * (1 - c), 2 * (1 + c)
        ddu, ddv = 4 * lam * s, -4 * lam * s
        f = v / u
        f1 = (dv * u - v * du) / u**2
        f2 = (ddv * u - v * ddu) / u**2 - 2 * du * f1 / u
        k = 1 / np.sqrt(2)
        return k * f, k * f1, k * f2

    def q3(z):
        y = 2 * z
        s, c = np.sin(lam * y), np.cos(lam * y)
        u = y + 1 / b - s / lam
        v = y + 1 / b + s / lam
        du, dv = 2 * (1 - c), 2 * (1 + c)
        ddu, ddv = 4 * lam * s, -4 * lam * s
        f = u / v
        f1 = (du * v - u * dv) / v**2
        f2 = (ddu * v - u * ddv) / v**2 - 2 * dv * f1 / v
        k = np.sqrt(2)
        return k * f, k * f1, k * f2

    return MeromorphicHandle.from_callable(r3, zeros(+1), zeros(-1), reciprocal=q3, name="r_exp")


# ---------------------------------------------------------------------------
# numeric oracles


def _kernel_matrix(k: ConvolutionKernelSpec, xi: float, n: int):
    u, w = gauss_legendre01(n)
    x = xi * u
    kk = k.numeric()
    return x, xi * w, kk(x[:, None] - x[None, :])


def h2_nystrom(k: ConvolutionKernelSpec, xi: float, n: int = 80) -> float:
    """``h2(xi) = (S_xi^{-1} 1)(xi)`` by Nystrom inversion with endpoint interpolation."""
    x, w, K = _kernel_matrix(k, xi, n)
    A = np.eye(n) + K * w[None, :]
    g = np.linalg.solve(A, np.ones(n))
    kk = k.numeric()
    return float(np.real(1 - np.sum(kk(xi - x) * w * g)))


def fundamental_solution_eval(k: ConvolutionKernelSpec, xi: float, rho: complex, n_quad: int = 80) -> np.ndarray:
    """``W(xi, rho) = I + i rho J G`` with ``G_jk = (S_xi^{-1} y_k, Phi_j)``.

    ``y_1 = (I - rho A)^{-1} M`` and ``y_2 = (I - rho A)^{-1} 1 = e^{i rho x}``.
    The resolvent of the Volterra integrator is applied in closed form:
    ``y = g + i rho int_0^x e^{i rho (x - t)} g(t) dt``.
    """
    rho = complex(rho)
    x, w, K = _kernel_matrix(k, xi, n_quad)
    A = np.eye(n_quad) + K * w[None, :]
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularOperator(f"S_xi is singular at xi = {xi} (condition {cond:.2e})")
    Mf = m_function(k).numeric()
    # y_1 by integration by parts: y = e^{i rho x} M(0) + int_0^x e^{i rho (x-t)} k(t) dt
    us, ws = gauss_legendre01(max(40, n_quad // 2))
    kk = k.numeric()
    y1 = np.empty(n_quad, dtype=complex)
    for i, xv in enumerate(x):
        t = xv * us
        y1[i] = np.exp(1j * rho * xv) * Mf(0.0) + xv * np.sum(ws * np.exp(1j * rho * (xv - t)) * kk(t))
    y2 = np.exp(1j * rho * x)
    Mx = np.asarray(Mf(x), dtype=float) * np.ones(n_quad)
    G = np.empty((2, 2), dtype=complex)
    for col, y in enumerate((y1, y2)):
        sol = np.linalg.solve(A, y)
        G[0, col] = np.sum(w * sol * Mx)
        G[1, col] = np.sum(w * sol)
    J = np.array([[0, 1], [1, 0]])
    return np.eye(2) + 1j * rho * J @ G


def corollary_exact(bundle: ResolventBundle) -> bool:
    """Exact form of the zero/pole statement.

    The squarefree part of ``num(r) den(r)`` equals that of ``Delta(2x)``, both made monic.
    """
    if bundle.delta.degree() <= 0:
        return True
    r = hamiltonian_from_h2(bundle.h2).r_function()
    var = r.var
    prod = (r.num * r.den).monic()
    dom = prod.domain
    d2 = sp.Poly(sp.expand(bundle.delta.as_expr().subs(XI, 2 * var)), var, domain=dom).monic()
    return prod.sqf_part() == d2.sqf_part()


def h2_splits_delta(bundle: ResolventBundle) -> bool:
    """``Delta`` equals ``num(h2) den(h2)`` up to a constant factor."""
    prod = (bundle.h2.num * bundle.h2.den)
    if prod.degree() <= 0:
        return bundle.delta.degree() <= 0
    return prod.monic() == sp.Poly(bundle.delta.as_expr(), XI, domain=prod.domain).monic()


def corollary_points(bundle: ResolventBundle):
    """``(zeros and poles of r, {xi_k / 2})`` as numeric sorted lists."""
    h = hamiltonian_from_h2(bundle.h2)
    rp = ratfunc_roots_poles(h.r_function())
    locs = sorted((complex(sp.N(l)) for l, _ in list(rp.zeros) + list(rp.poles)), key=lambda z: (z.real, z.imag))
    half = sorted((complex(sp.N(l)) / 2 for l in bundle.singular_points), key=lambda z: (z.real, z.imag))
    return locs, half
