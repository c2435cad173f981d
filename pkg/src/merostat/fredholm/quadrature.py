"""Nystrom discretization of ``S f = f + int k(x, t) f(t) dt`` on ``(0, z)`` or a real interval.

A kernel is stored as ``k(x, t) = rho(x) kt(x, t) rho(t)``: the *reduced* kernel
``kt`` is analytic, and ``rho`` carries any algebraic factor.  ``rho = 1`` for
the sine, Airy and custom kernels.  For the Bessel kernel ``rho(x) = x^{alpha/2}``,
and the factor ``rho^2`` goes into a Gauss-Jacobi weight so every integrand
stays entire.

With discrete weights ``omega_i`` (which include ``rho^2``) the operator becomes
the symmetric matrix ``I + M`` with ``M_ij = omega_i^{1/2} kt(x_i, x_j) omega_j^{1/2}``.
Then ``det(I + M)`` approximates the Fredholm determinant.  For a complex scale
``z`` the nodes are ``z u_i`` with ``u_i`` in ``(0, 1)``, which discretizes
``T(z) f = z int_0^1 k(z x, z t) f(t) dt``.

Bilinear forms use ``(f, g) = int f(x) g*(x) dx`` with ``g*(x) = conj(g(conj x))``.
On the real axis this is the usual ``L^2`` product, and it continues analytically in ``z``.
"""

from __future__ import annotations

import cmath
import functools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from ..errors import InvalidRegion, NearSingular
from ..special import airy_ai, airy_aip, bessel_entire, besselj, sinc

COND_LIMIT = 1e12


# ---------------------------------------------------------------------------
# quadrature rules on (0, 1)


@functools.lru_cache(maxsize=64)
def gauss_legendre01(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


@functools.lru_cache(maxsize=64)
def gauss_jacobi01(n: int, alpha: float):
    """Nodes and weights for ``int_0^1 u^alpha f(u) du``."""
    t, w = roots_jacobi(n, 0.0, alpha)
    return (t + 1) / 2, w / 2 ** (1 + alpha)


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class SmoothKernel:
    """``Sine(gamma)``, ``Airy(gamma)``, ``Bessel(gamma, alpha)`` or ``Custom(func)``.

    ``func(x, t)`` must accept broadcastable (complex) arrays and be symmetric.
    """

    family: str
    gamma: float = 1.0
    alpha: float = 0.0
    func: Callable | None = field(default=None, compare=False)
    name: str = ""

    @classmethod
    def sine(cls, gamma: float):
        return cls("Sine", float(gamma))

    @classmethod
    def airy(cls, gamma: float):
        return cls("Airy", float(gamma))

    @classmethod
    def bessel(cls, gamma: float, alpha: float):
        if alpha <= -1:
            raise ValueError("the Bessel kernel needs alpha > -1")
        return cls("Bessel", float(gamma), float(alpha))

    @classmethod
    def custom(cls, func: Callable, name: str = "custom"):
        return cls("Custom", 1.0, 0.0, func, name)

    @property
    def factored(self) -> bool:
        return self.family == "Bessel" and self.alpha != 0

    def rho(self, x):
        """The algebraic factor ``rho(x)`` (principal branch)."""
        x = np.asarray(x)
        if not self.factored:
            return np.ones(x.shape)
        return x ** (self.alpha / 2)

    def reduced(self, x, t):
        """``kt(x, t)``; for ``rho = 1`` this is the kernel itself."""
        x, t = np.broadcast_arrays(np.asarray(x), np.asarray(t))
        if self.family == "Sine":
            return self.gamma * sinc(x - t)
        if self.family == "Airy":
            return self.gamma * _airy_kernel(x, t)
        if self.family == "Bessel":
            return self.gamma * _bessel_reduced(self.alpha, x, t)
        return self.func(x, t)

    def __call__(self, x, t):
        """The kernel ``k(x, t)`` itself."""
        return self.rho(x) * self.reduced(x, t) * self.rho(t)

    def check_scale(self, z: complex):
        """Raise :class:`InvalidRegion` if ``z`` leaves the analyticity region."""
        if self.family == "Bessel" and not float(self.alpha).is_integer():
            if z.imag == 0 and z.real < 0:
                raise InvalidRegion("the Bessel kernel is continued off the cut (-inf, 0]")


def _airy_kernel(x, t):
    """``(Ai(x) Ai'(t) - Ai'(x) Ai(t)) / (x - t)``; diagonal ``Ai'(x)^2 - x Ai(x)^2``."""
    ax, apx = airy_ai(x), airy_aip(x)
    at, apt = airy_ai(t), airy_aip(t)
    diff = x - t
    near = np.abs(diff) < 1e-9
    safe = np.where(near, 1.0, diff)
    off = (ax * apt - apx * at) / safe
    diag = apx * apx - x * ax * ax
    return np.where(near, diag, off)


@functools.lru_cache(maxsize=16)
def _inner_rule(alpha: float, m: int):
    return gauss_jacobi01(m, alpha)


def _bessel_reduced(alpha: float, x, t):
    """``(1/4) int_0^1 s^alpha E(x s) E(t s) ds`` with ``E(z) = J_alpha(sqrt z) / z^{alpha/2}``."""
    big = float(max(np.max(np.abs(x), initial=0.0), np.max(np.abs(t), initial=0.0)))
    m = max(32, int(12 + 4 * np.sqrt(big)))
    s, w = _inner_rule(alpha, m)
    ex = bessel_entire(alpha, np.multiply.outer(x, s))
    et = bessel_entire(alpha, np.multiply.outer(t, s))
    return 0.25 * np.sum(ex * et * w, axis=-1)


def bessel_kernel_closed(alpha: float, x: float, t: float) -> float:
    """Closed form ``(phi(x) psi(t) - phi(t) psi(x)) / (x - t)`` for real ``x != t > 0``.

    Built from :func:`besselj` only; used to cross-check the integral form.
    """
    def phi_psi(y):
        u = np.sqrt(y)
        j = besselj(alpha, u)
        jp = alpha / u * j - besselj(alpha + 1, u)
        return j, u / 2 * jp

    px, sx = phi_psi(x)
    pt, st = phi_psi(t)
    return (px * st - pt * sx) / (x - t)


# ---------------------------------------------------------------------------
# discretized operator


@dataclass(frozen=True)
class DiscretizedOperator:
    kernel: SmoothKernel
    nodes: np.ndarray  # physical nodes
    weights: np.ndarray  # omega_i, including rho^2 for factored kernels
    sqrt_weights: np.ndarray
    matrix: np.ndarray  # M = omega^{1/2} kt omega^{1/2}
    z: complex
    interval: tuple

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def system(self) -> np.ndarray:
        return np.eye(self.n) + self.matrix

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix)


def _assemble(kernel, nodes, weights, sqrt_weights, z, interval):
    kt = kernel.reduced(nodes[:, None], nodes[None, :])
    kt = 0.5 * (kt + kt.T)  # exact symmetry; removes rounding asymmetry
    M = sqrt_weights[:, None] * kt * sqrt_weights[None, :]
    return DiscretizedOperator(kernel, nodes, weights, sqrt_weights, M, z, interval)


def nystrom_build(kernel: SmoothKernel, z: complex, n: int) -> DiscretizedOperator:
    """Discretize ``I + T(z)`` with an ``n``-point Gauss rule on ``(0, 1)`` scaled by ``z``."""
    if n < 8:
        raise ValueError("n must be at least 8")
    z = complex(z)
    kernel.check_scale(z)
    real = z.imag == 0 and z.real > 0
    zz = z.real if real else z
    if kernel.factored:
        u, w = gauss_jacobi01(n, kernel.alpha)
        pw = (zz ** (1 + kernel.alpha)) if real else cmath.exp((1 + kernel.alpha) * cmath.log(z))
        weights = pw * w
        sqrt_weights = np.sqrt(w) * ((zz ** ((1 + kernel.alpha) / 2)) if real
                                     else cmath.exp((1 + kernel.alpha) / 2 * cmath.log(z)))
    else:
        u, w = gauss_legendre01(n)
        weights = zz * w
        sqrt_weights = np.sqrt(w) * (np.sqrt(zz) if real else cmath.sqrt(z))
    nodes = zz * u
    return _assemble(kernel, nodes, weights, sqrt_weights, z, (0.0, zz))


def interval_operator(kernel: SmoothKernel, a: float, b: float, n: int) -> DiscretizedOperator:
    """Discretize ``S f = f + int_a^b k(x, t) f(t) dt`` on a real interval (unfactored kernels)."""
    if kernel.factored:
        raise ValueError("factored kernels are discretized on (0, z) only")
    if n < 8:
        raise ValueError("n must be at least 8")
    u, w = gauss_legendre01(n)
    L = b - a
    return _assemble(kernel, a + L * u, L * w, np.sqrt(L * w), complex(L), (a, b))


def _conj_fn(g):
    return lambda x: np.conj(g(np.conj(x)))


def _solve(op: DiscretizedOperator, f, check=True):
    """``v = omega^{1/2} U`` where ``S u = f`` and ``u = rho U`` at the nodes."""
    A = op.system
    if check:
        c = np.linalg.cond(A)
        if not np.isfinite(c) or c > COND_LIMIT:
            raise NearSingular(f"condition number {c:.3e} exceeds {COND_LIMIT:.0e}")
    F = np.asarray(f(op.nodes)) / op.kernel.rho(op.nodes)
    return np.linalg.solve(A, op.sqrt_weights * F)


def resolvent_bilinear(op: DiscretizedOperator, f, g, check: bool = True) -> complex:
    """``(S^{-1} f, g)`` over the discretized interval, with ``g*(x) = conj(g(conj x))``."""
    v = _solve(op, f, check)
    G = np.asarray(_conj_fn(g)(op.nodes)) / op.kernel.rho(op.nodes)
    val = np.sum(op.sqrt_weights * G * v)
    return complex(val)


def solve_at(op: DiscretizedOperator, f, x, check: bool = True) -> complex:
    """``(S^{-1} f)(x)`` at an arbitrary point by Nystrom interpolation."""
    v = _solve(op, f, check)
    kt = op.kernel.reduced(np.full(op.n, x), op.nodes)
    rx = op.kernel.rho(np.asarray(x))
    return complex(f(np.asarray(x)) - rx * np.sum(kt * op.sqrt_weights * v))


def resolvent_kernel(op: DiscretizedOperator, x, y, check: bool = True) -> complex:
    """``Gamma(x, y)`` with ``S^{-1} = I + Gamma``, i.e. ``Gamma = -S^{-1} k(., y)``."""
    def col(s):
        return op.kernel(s, np.full(np.shape(s), y))
    return -solve_at(op, col, x, check)


def fredholm_det(op: DiscretizedOperator) -> complex:
    """``det(I + M)`` by LU elimination (analytic in the entries, so complex steps are valid)."""
    d = np.linalg.det(op.system)
    return complex(d)


def fredholm_det_eig(op: DiscretizedOperator) -> complex:
    """``det(I + M)`` as the product of ``1 + eigenvalues`` (independent of elimination)."""
    if op.is_real:
        ev = np.linalg.eigvalsh(op.matrix)
    else:
        ev = np.linalg.eigvals(op.matrix)
    return complex(np.prod(1 + ev))


def operator_norm(op: DiscretizedOperator) -> float:
    """Largest singular value of the discretized ``T``."""
    return float(np.linalg.norm(op.matrix, 2))
