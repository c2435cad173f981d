"""Scalar special functions used by the integral kernels.

* ``sinc(x) = sin(pi x) / (pi x)`` with the removable value 1 at 0.
* ``besselj(alpha, x)`` for real ``alpha > -1`` and ``x >= 0``: ascending
  series for small ``x``, Miller's backward recurrence normalized by the
  Neumann-type sum ``(x/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(x)``
  otherwise.
* ``airy_ai`` / ``airy_aip``: Maclaurin series for ``|x| <= 2``; modified
  Bessel integrals for ``x > 2``; ``J_{+-1/3}, J_{+-2/3}`` for ``x < -2``.
* ``bessel_entire(alpha, z)``: ``J_alpha(sqrt z) / z^{alpha/2}``, an entire
  function of ``z`` (used to build the Bessel kernel without a branch cut).

Accuracy contracts are listed in :data:`CONTRACTS` and tested against mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain


@dataclass(frozen=True)
class AccuracyContract:
    function: str
    domain: str
    bound: float
    measure: str


CONTRACTS = {
    "sinc": AccuracyContract("sinc", "real or complex x", 1e-15, "relative; exact 1 at x = 0"),
    "besselj": AccuracyContract(
        "besselj", "alpha in (-1, 10], x in [0, 100]", 1e-12,
        "relative to max(|J_alpha(x)|, sqrt(2 / (pi x)))"),
    "airy_ai": AccuracyContract("airy_ai", "x in [-10, 10]", 1e-12, "absolute"),
    "airy_aip": AccuracyContract("airy_aip", "x in [-10, 10]", 1e-12, "absolute"),
}


# ---------------------------------------------------------------------------
# sinc


def sinc(x):
    """``sin(pi x)/(pi x)``, vectorized, real or complex."""
    x = np.asarray(x)
    z = np.pi * x
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    z2 = z * z
    out = np.where(small, 1 - z2 / 6 + z2 * z2 / 120, np.sin(safe) / safe)
    return out if out.ndim else out[()]


# ---------------------------------------------------------------------------
# Bessel J


def _bessel_series(alpha: float, x: complex):
    half = x / 2
    lead = half**alpha / math.gamma(alpha + 1)
    term = 1.0
    total = 1.0
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + alpha))
        total += term
        if abs(term) < 1e-17 * abs(total) and k > 2:
            break
        if k > 500:
            break
    return lead * total


def _miller(nu0: float, count: int, x: float) -> list[float]:
    """``J_{nu0 + j}(x)`` for ``j = 0..count-1`` by backward recurrence."""
    N = count + int(x) + 40 + int(4 * math.sqrt(x + 1))
    N += N % 2
    vals = [0.0] * (N + 2)
    vals[N + 1] = 0.0
    vals[N] = 1e-300
    for j in range(N, 0, -1):
        nu = nu0 + j
        vals[j - 1] = (2 * nu / x) * vals[j] - vals[j + 1]
        if abs(vals[j - 1]) > 1e250:
            for i in range(j - 1, N + 2):
                vals[i] *= 1e-250
    # (x/2)^nu0 = Gamma(nu0 + 1) J_nu0 + sum_{k>=1} (nu0 + 2k) Gamma(nu0 + k)/k! J_{nu0+2k}
    s = math.gamma(nu0 + 1) * vals[0]
    for k in range(1, N // 2 + 1):
        log_coef = math.lgamma(nu0 + k) - math.lgamma(k + 1)
        s += (nu0 + 2 * k) * math.exp(log_coef) * vals[2 * k]
    scale = (x / 2) ** nu0 / s
    return [v * scale for v in vals[:count]]


def besselj(alpha: float, x):
    """Bessel function of the first kind ``J_alpha(x)``, real ``alpha > -1``, ``x >= 0``.

    Negative ``x`` is accepted only for integer order.  Vectorized over ``x``.
    """
    if np.ndim(x):
        return np.array([besselj(alpha, float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
    if alpha <= -1:
        raise OutOfDomain("order must exceed -1")
    x = float(x)
    if x < 0:
        if float(alpha).is_integer():
            return (-1) ** int(alpha) * besselj(alpha, -x)
        raise OutOfDomain("negative argument needs an integer order")
    if x == 0:
        if alpha == 0:
            return 1.0
        if alpha > 0:
            return 0.0
        raise OutOfDomain("J_alpha(0) is infinite for alpha < 0")
    if x <= 4.0 or x < 0.5 * alpha:
        return float(_bessel_series(alpha, x))
    if alpha < 0:
        nu0, m = alpha, 0
    else:
        m = int(math.floor(alpha))
        nu0 = alpha - m
    return _miller(nu0, m + 1, x)[m]


def bessel_entire(alpha: float, z):
    """``E(z) = J_alpha(sqrt z) / z^{alpha/2} = sum_k (-z/4)^k / (k! Gamma(k+alpha+1) 2^alpha)``.

    Entire in ``z``; vectorized over real or complex arrays.
    """
    z = np.asarray(z, dtype=complex if np.iscomplexobj(z) else float)
    q = -z / 4
    term = np.full(z.shape, 1.0 / (math.gamma(alpha + 1) * 2.0**alpha),
                   dtype=z.dtype if z.dtype.kind == "c" else float)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + alpha))
        total = total + term
        if k > 5 and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
        if k > 400:
            break
    return total if total.ndim else total[()]


def bessel_phi(alpha: float, x):
    """``phi(x) = J_alpha(sqrt x)`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    return np.asarray(x) ** (alpha / 2) * bessel_entire(alpha, x)


def bessel_psi(alpha: float, x):
    """``psi(x) = x phi'(x) = (sqrt x / 2) J_alpha'(sqrt x) = x^{alpha/2} (alpha/2 E(x) + x E'(x))``."""
    x = np.asarray(x, dtype=float)
    return x ** (alpha / 2) * (alpha / 2 * bessel_entire(alpha, x) + x * _entire_derivative(alpha, x))


def _entire_derivative(alpha: float, z):
    # termwise: E_alpha'(z) = -E_{alpha+1}(z) / 2
    return -0.5 * bessel_entire(alpha + 1, z)


# ---------------------------------------------------------------------------
# Airy


_AI0 = 1.0 / (3 ** (2 / 3) * math.gamma(2 / 3))
_AIP0 = -1.0 / (3 ** (1 / 3) * math.gamma(1 / 3))


def _airy_maclaurin(x):
    """``(Ai, Ai')`` from the Maclaurin series; accurate for ``|x| <= 2`` (and complex ``|x| <= 4``)."""
    f, g = 1.0, x  # Ai = c1 f - c2 g with c1 = Ai(0), c2 = -Ai'(0)
    fp, gp = 0.0, 1.0
    tf, tg = 1.0, x
    x3 = x * x * x
    k = 0
    while True:
        k += 1
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        f += tf
        g += tg
        fp += 3 * k * tf / x if x != 0 else 0.0
        gp += (3 * k + 1) * tg / x if x != 0 else 0.0
        if abs(tf) + abs(tg) < 1e-18 and k > 3:
            break
        if k > 200:
            break
    return _AI0 * f + _AIP0 * g, _AI0 * fp + _AIP0 * gp


def _bessel_k(nu: float, z: float) -> float:
    """``K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du`` by the trapezoid rule (``z > 0``)."""
    upper = math.acosh(1 + 45.0 / z)
    h = 0.04
    n = int(upper / h) + 1
    u = np.arange(n + 1) * h
    vals = np.exp(-z * (np.cosh(u) - 1)) * np.cosh(nu * u)
    return float(h * (vals.sum() - 0.5 * vals[0])) * math.exp(-z)


def _airy_scalar(x: float):
    if abs(x) <= 2:
        return _airy_maclaurin(x)
    if x > 0:
        zeta = 2 / 3 * x**1.5
        ai = math.sqrt(x / 3) / math.pi * _bessel_k(1 / 3, zeta)
        aip = -x / (math.pi * math.sqrt(3)) * _bessel_k(2 / 3, zeta)
        return ai, aip
    y = -x
    zeta = 2 / 3 * y**1.5
    ai = math.sqrt(y) / 3 * (besselj(1 / 3, zeta) + besselj(-1 / 3, zeta))
    aip = y / 3 * (besselj(2 / 3, zeta) - besselj(-2 / 3, zeta))
    return ai, aip


def _airy(x):
    if np.ndim(x):
        pairs = [_airy(v) for v in np.ravel(x)]
        return (np.array([p[0] for p in pairs]).reshape(np.shape(x)),
                np.array([p[1] for p in pairs]).reshape(np.shape(x)))
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        if abs(x) > 4:
            raise OutOfDomain("complex Airy arguments are supported for |z| <= 4")
        if x.imag == 0:
            a, b = _airy_scalar(x.real)
            return complex(a), complex(b)
        return _airy_maclaurin(x)
    x = float(x)
    if abs(x) > 40:
        raise OutOfDomain("Airy functions are provided on [-40, 40]")
    return _airy_scalar(x)


def airy_ai(x):
    return _airy(x)[0]


def airy_aip(x):
    return _airy(x)[1]


# ---------------------------------------------------------------------------
# dispatcher


def eval_special(fid: str, x, alpha: float | None = None):
    """Evaluate a special function by id: ``sinc``, ``besselj``, ``airy_ai``, ``airy_aip``, ``exp``, ``phi``, ``psi``."""
    if fid == "sinc":
        return sinc(x)
    if fid == "exp":
        return np.exp(x)
    if fid in ("besselj", "phi", "psi"):
        if alpha is None:
            raise ValueError(f"{fid} needs an order alpha")
        return {"besselj": besselj, "phi": bessel_phi, "psi": bessel_psi}[fid](alpha, x)
    if fid == "airy_ai":
        return airy_ai(x)
    if fid == "airy_aip":
        return airy_aip(x)
    raise OutOfDomain(f"unknown special function {fid!r}")
