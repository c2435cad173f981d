"""Sigma functions of the sine kernel (Painleve V) and the Bessel kernel (Painleve III).

Sine kernel with ``gamma = -1``, ``x = 2 pi t``:

* bilinear route:  ``sigma(x) = -(S~_{2t}^{-1} e, e)_{2t}`` with ``e(u) = exp(i pi u)``;
* determinant route: ``sigma(x) = xi D'(xi) / D(xi)`` at ``xi = x / pi``;
* resolvent route: ``sigma(x) = -2 t R(t, t)`` with ``R(t, t) = Gamma_t(t, t)`` on ``(-t, t)``.

The sigma-form ODE is ``(x s'')^2 + 4 (x s' - s)(x s' - s + s'^2) = 0``.

Bessel kernel with ``gamma = -1``:
``sigma(s) = (1/4)(S_s^{-1} phi, phi) = s R(s, s)`` with ``R = -d/ds log det S_s``,
``q(s) = (S_s^{-1} phi)(s)`` and ``(s R)' = q^2 / 4``.  The sigma-form ODE is
``(s sigma'')^2 + sigma'(sigma - s sigma')(4 sigma' - 1) - alpha^2 sigma'^2 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .._parallel import pmap
from ..errors import GridTooCoarse
from ..special import bessel_entire, sinc
from .quadrature import (
    SmoothKernel,
    fredholm_det,
    interval_operator,
    nystrom_build,
    resolvent_bilinear,
    resolvent_kernel,
    solve_at,
)

N_QUAD = 60
SINE_P5 = SmoothKernel.sine(-1.0)


def _exp_pi(u):
    return np.exp(1j * np.pi * np.asarray(u))


# ---------------------------------------------------------------------------
# differentiation helpers


def complex_step(fn, x: float, h: float = 1e-20) -> float:
    """``f'(x)`` for ``f`` real-valued on the real axis and analytic nearby."""
    return fn(complex(x, h)).imag / h


def central_fd4(fn, x, h):
    """Fourth-order central difference of a scalar function."""
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def _fd_weights(offsets, order: int) -> np.ndarray:
    offsets = np.asarray(offsets, dtype=float)
    m = len(offsets)
    V = np.vander(offsets, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


def fd4_derivatives(x: np.ndarray, y: np.ndarray):
    """First and second derivatives on a uniform grid, fourth order throughout.

    Interior points use 5-point central stencils; the two points at each end
    use 6-point one-sided stencils.
    """
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ValueError("fd4 needs a uniform grid")
    n = len(x)
    d1 = np.empty(n, dtype=np.result_type(y, float))
    d2 = np.empty_like(d1)
    for i in range(n):
        if 2 <= i <= n - 3:
            idx = np.arange(i - 2, i + 3)
        elif i < 2:
            idx = np.arange(0, 6)
        else:
            idx = np.arange(n - 6, n)
        off = idx - i
        d1[i] = _fd_weights(off, 1) @ y[idx] / h
        d2[i] = _fd_weights(off, 2) @ y[idx] / h**2
    return d1, d2


def chebyshev_derivatives(x: np.ndarray, y: np.ndarray, degree: int):
    """First and second derivatives from a least-squares Chebyshev fit."""
    C = np.polynomial.Chebyshev
    if np.iscomplexobj(y):
        fr = C.fit(x, y.real, degree)
        fi = C.fit(x, y.imag, degree)
        return (fr.deriv(1)(x) + 1j * fi.deriv(1)(x), fr.deriv(2)(x) + 1j * fi.deriv(2)(x))
    f = C.fit(x, y, degree)
    return f.deriv(1)(x), f.deriv(2)(x)


# ---------------------------------------------------------------------------
# Painleve V


@dataclass(frozen=True)
class SigmaP5Routes:
    x: float
    bilinear: complex
    log_derivative: complex
    resolvent: complex

    @property
    def max_discrepancy(self) -> float:
        v = [self.bilinear, self.log_derivative, self.resolvent]
        return max(abs(a - b) for a in v for b in v)


def sigma_p5(x, n: int = N_QUAD) -> complex:
    """``sigma(x) = -(S~_{2t}^{-1} e, e)_{2t}``, ``x = 2 pi t`` (real or complex ``x``)."""
    op = nystrom_build(SINE_P5, complex(x) / np.pi, n)
    return -resolvent_bilinear(op, _exp_pi, _exp_pi)


def sine_determinant(xi, n: int = N_QUAD, gamma: float = -1.0) -> complex:
    """``D(xi) = det(I + gamma K_sine)`` on ``(0, xi)``."""
    return fredholm_det(nystrom_build(SmoothKernel.sine(gamma), xi, n))


def sigma_p5_log_derivative(x, n: int = N_QUAD) -> complex:
    """``sigma(x) = xi D'(xi) / D(xi)``, ``xi = x / pi``.

    ``D'`` is a complex step on the real axis and a fourth-order difference elsewhere.
    """
    xi = complex(x) / np.pi
    if xi.imag == 0:
        d = sine_determinant(xi.real, n)
        dp = complex_step(lambda z: sine_determinant(z, n), xi.real)
        return complex(xi.real * dp / d.real)
    h = 1e-3 * max(1.0, abs(xi))
    dp = central_fd4(lambda z: sine_determinant(z, n), xi, h)
    return xi * dp / sine_determinant(xi, n)


def resolvent_diagonal_sine(t: float, n: int = N_QUAD, gamma: float = -1.0) -> float:
    """``R(t, t) = Gamma_t(t, t)`` for the sine kernel on the symmetric interval ``(-t, t)``."""
    if t == 0:
        return -gamma
    op = interval_operator(SmoothKernel.sine(gamma), -t, t, n)
    return resolvent_kernel(op, t, t).real


def sigma_p5_resolvent(x: float, n: int = N_QUAD) -> float:
    """``sigma(x) = -2 t R(t, t)``, ``x = 2 pi t``."""
    t = x / (2 * np.pi)
    return -2 * t * resolvent_diagonal_sine(t, n)


def sigma_p5_routes(x: float, n: int = N_QUAD) -> SigmaP5Routes:
    return SigmaP5Routes(x, sigma_p5(x, n), sigma_p5_log_derivative(x, n), complex(sigma_p5_resolvent(x, n)))


def q_r_functions(t: float, n: int = N_QUAD):
    """``(q(t), r(t), R(t, t))`` for ``gamma = -1``.

    ``r(t) = (S_t^{-1} e)(t)`` on ``(-t, t)``; ``q(t) = (S~_t^{-1} e)(t)`` on ``(0, t)``.
    """
    if t == 0:
        return 1.0 + 0j, 1.0 + 0j, 1.0
    sym = interval_operator(SINE_P5, -t, t, n)
    r = solve_at(sym, _exp_pi, t)
    q = solve_at(nystrom_build(SINE_P5, t, n), _exp_pi, t)
    R = resolvent_kernel(sym, t, t).real
    return q, r, R


def triangular_q(t: float, n: int):
    """``q`` at the nodes of ``(0, t)`` from the Cholesky factor of the discretized operator.

    With ``S = L L^T`` the value of ``S_{x_i}^{-1} e`` at the last node of the leading
    ``i x i`` block is ``(L^{-1} b)_i / L_ii`` (``b = omega^{1/2} e``), the discrete
    form of ``q = S_-^{-1} e``.
    """
    op = nystrom_build(SINE_P5, t, n)
    L = np.linalg.cholesky(op.system)
    b = op.sqrt_weights * _exp_pi(op.nodes)
    y = solve_triangular(L, b, lower=True)
    return op.nodes, y / (np.diag(L) * op.sqrt_weights)


# ---------------------------------------------------------------------------
# parity split


@dataclass(frozen=True)
class ParitySplit:
    D: float
    D_plus: float
    D_minus: float
    ratio: float
    h2_direct: float  # (S_{2t}^{-1} 1)(2t) on (0, 2t)
    h2_symmetric: float  # 1 + int_{-t}^{t} Gamma_t(t, y) dy

    @property
    def product_error(self) -> float:
        return abs(self.D_plus * self.D_minus - self.D) / abs(self.D)


def parity_split(gamma: float, t: float, n: int = N_QUAD) -> ParitySplit:
    """Determinants of the full, even and odd parts of the sine kernel on ``(-t, t)``."""
    if gamma == 0 or t == 0:
        return ParitySplit(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    full = SmoothKernel.sine(gamma)

    def plus(x, y):
        return 0.5 * gamma * (sinc(x - y) + sinc(-x - y))

    def minus(x, y):
        return 0.5 * gamma * (sinc(x - y) - sinc(-x - y))

    D = fredholm_det(interval_operator(full, -t, t, n)).real
    Dp = fredholm_det(interval_operator(SmoothKernel.custom(plus, "even"), -t, t, n)).real
    Dm = fredholm_det(interval_operator(SmoothKernel.custom(minus, "odd"), -t, t, n)).real
    one = lambda u: np.ones(np.shape(u), dtype=complex)  # noqa: E731
    h2 = solve_at(nystrom_build(full, 2 * t, n), one, 2 * t).real
    h2s = solve_at(interval_operator(full, -t, t, n), one, t).real
    return ParitySplit(D, Dp, Dm, Dm / Dp, h2, h2s)


# ---------------------------------------------------------------------------
# Bessel kernel


def bessel_norm_bound(gamma: float, alpha: float, xi: float, n: int = N_QUAD):
    """``(||T_xi||, ||T_xi|| <= |gamma| + 1e-8)`` for the discretized Bessel kernel."""
    op = nystrom_build(SmoothKernel.bessel(gamma, alpha), xi, n)
    norm = float(np.linalg.norm(op.matrix, 2)) if gamma != 0 else 0.0
    return norm, norm <= abs(gamma) + 1e-8


@dataclass(frozen=True)
class SigmaP3:
    s: float
    alpha: float
    sigma: float  # (1/4)(S^{-1} phi, phi)
    R: float  # Gamma_s(s, s)
    q: float  # (S_s^{-1} phi)(s)
    R_logdet: float  # -d/ds log det S_s

    @property
    def sigma_diag(self) -> float:
        return self.s * self.R


def _p3_op(s, alpha, n):
    return nystrom_build(SmoothKernel.bessel(-1.0, alpha), s, n)


def _phi(alpha):
    return lambda x: bessel_phi_complex(alpha, x)


def bessel_phi_complex(alpha: float, x):
    """``J_alpha(sqrt x)`` continued off the cut ``(-inf, 0]``."""
    x = np.asarray(x)
    return x ** (alpha / 2) * bessel_entire(alpha, x)


def bessel_determinant(s, alpha: float, n: int = N_QUAD) -> complex:
    return fredholm_det(_p3_op(s, alpha, n))


def sigma_p3_value(s, alpha: float, n: int = N_QUAD) -> complex:
    """``(1/4)(S_s^{-1} phi, phi)`` for real or complex ``s``."""
    op = _p3_op(s, alpha, n)
    phi = _phi(alpha)
    return 0.25 * resolvent_bilinear(op, phi, phi)


def sigma_p3(s: float, alpha: float, n: int = N_QUAD) -> SigmaP3:
    if s <= 0:
        raise ValueError("s must be positive")
    op = _p3_op(s, alpha, n)
    phi = _phi(alpha)
    sigma = 0.25 * resolvent_bilinear(op, phi, phi).real
    R = resolvent_kernel(op, s, s).real
    q = solve_at(op, phi, s).real
    dlog = complex_step(lambda z: np.log(bessel_determinant(z, alpha, n)), s)
    return SigmaP3(s, alpha, sigma, R, q, -dlog)


# ---------------------------------------------------------------------------
# traces and ODE residuals


@dataclass(frozen=True)
class SigmaTrace:
    x: np.ndarray
    sigma: np.ndarray
    which: str = "P5"
    alpha: float = 0.0
    n_quad: int = N_QUAD
    scheme: str = "fd4"
    degree: int | None = None
    d1: np.ndarray | None = field(default=None, compare=False)
    d2: np.ndarray | None = field(default=None, compare=False)
    residual: np.ndarray | None = field(default=None, compare=False)

    @property
    def order(self) -> str:
        return "4" if self.scheme == "fd4" else f"spectral(deg {self.degree})"

    def max_residual(self) -> float:
        return float(np.max(self.residual))


def _grid(a, b, npts, kind):
    if kind == "uniform":
        return np.linspace(a, b, npts)
    if kind == "chebyshev":
        k = np.arange(npts)
        return (a + b) / 2 - (b - a) / 2 * np.cos(np.pi * k / (npts - 1))
    raise ValueError(f"unknown grid {kind!r}")


def _ode_terms(which, alpha, x, s, d1, d2):
    if which == "P5":
        a = x * d1 - s
        return [(x * d2) ** 2, 4 * a * a, 4 * a * d1 * d1]
    if which == "P3":
        return [(x * d2) ** 2, d1 * (s - x * d1) * (4 * d1 - 1), alpha**2 * d1 * d1]
    raise ValueError(f"unknown equation {which!r}")


def _ode_value(which, alpha, x, s, d1, d2):
    if which == "P5":
        a = x * d1 - s
        return (x * d2) ** 2 + 4 * a * (a + d1 * d1)
    return (x * d2) ** 2 + d1 * (s - x * d1) * (4 * d1 - 1) - alpha**2 * d1 * d1


def ode_residual(trace: SigmaTrace, which: str | None = None, alpha: float | None = None,
                 scheme: str | None = None, degree: int | None = None) -> SigmaTrace:
    """Pointwise relative residual of the sigma-form ODE.

    The residual is ``|ODE| / max(|terms|, sigma'^2)``.  ``sigma'^2`` is a floor
    with the dimension of every term.  It matters where all terms vanish
    together, e.g. ``sigma = s/4`` for ``alpha = 0``.
    """
    which = which or trace.which
    alpha = trace.alpha if alpha is None else alpha
    scheme = scheme or trace.scheme
    x = np.asarray(trace.x, dtype=float)
    if len(x) < 64:
        raise GridTooCoarse(f"{len(x)} points given, at least 64 required")
    s = np.asarray(trace.sigma)
    if scheme == "fd4":
        d1, d2 = fd4_derivatives(x, s)
    elif scheme == "chebyshev":
        degree = degree or max(30, min(len(x) - 1, 60))
        d1, d2 = chebyshev_derivatives(x, s, degree)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    val = _ode_value(which, alpha, x, s, d1, d2)
    terms = _ode_terms(which, alpha, x, s, d1, d2)
    scale = np.maximum.reduce([np.abs(t) for t in terms] + [np.abs(d1) ** 2])
    with np.errstate(invalid="ignore", divide="ignore"):
        res = np.where(val == 0, 0.0, np.abs(val) / scale)
    return SigmaTrace(x, s, which, alpha, trace.n_quad, scheme, degree, d1, d2, res)


def sigma_trace_p5(xmin: float, xmax: float, npts: int, n_quad: int = N_QUAD,
                   grid: str = "uniform", scheme: str = "fd4") -> SigmaTrace:
    x = _grid(xmin, xmax, npts, grid)
    s = np.array(pmap(lambda v: sigma_p5(v, n_quad).real, x))
    return ode_residual(SigmaTrace(x, s, "P5", 0.0, n_quad, scheme))


def sigma_trace_p3(smin: float, smax: float, npts: int, alpha: float, n_quad: int = N_QUAD,
                   grid: str = "uniform", scheme: str = "fd4") -> SigmaTrace:
    x = _grid(smin, smax, npts, grid)
    s = np.array(pmap(lambda v: sigma_p3_value(v, alpha, n_quad).real, x))
    return ode_residual(SigmaTrace(x, s, "P3", alpha, n_quad, scheme))
