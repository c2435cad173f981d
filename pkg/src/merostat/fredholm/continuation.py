"""Analytic continuation of ``sigma(z) = (S_z^{-1} f, g)_z`` in the interval length.

``sigma`` is evaluated through ``T(z)``.  Its poles can only sit at zeros of
``D(z) = det(I + T(z))``, so the probe locates those zeros instead of looking
for blow-up.  Each cell of the region gets an argument-principle count.  Each
zero found is refined by the secant method.  The probe then checks that
``1 / sigma`` vanishes linearly there and measures the residue on a small circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .._parallel import pmap
from ..errors import InvalidRegion, NearSingular
from .quadrature import SmoothKernel, fredholm_det, nystrom_build, resolvent_bilinear


@dataclass(frozen=True)
class PoleCandidate:
    location: complex
    winding: int
    simple: bool
    fit_r2: float
    residue: complex


@dataclass(frozen=True)
class ContinuationMap:
    z: np.ndarray  # complex grid, shape (ny, nx)
    sigma: np.ndarray  # nan where the solve is too ill-conditioned
    det: np.ndarray
    candidates: tuple
    region: tuple
    n: int


def sigma_at(kernel: SmoothKernel, z, f, g, n: int, check: bool = False) -> complex:
    return resolvent_bilinear(nystrom_build(kernel, z, n), f, g, check=check)


def det_at(kernel: SmoothKernel, z, n: int) -> complex:
    return fredholm_det(nystrom_build(kernel, z, n))


def _check_region(kernel: SmoothKernel, region):
    x0, x1, y0, y1 = region
    if not (x0 < x1 and y0 <= y1):
        raise InvalidRegion("region must be (xmin, xmax, ymin, ymax) with xmin < xmax, ymin <= ymax")
    if kernel.family == "Bessel" and not float(kernel.alpha).is_integer():
        if x0 <= 0 and y0 <= 0 <= y1:
            raise InvalidRegion("region meets the cut (-inf, 0] of the Bessel kernel")


def winding_number(fn, x0, x1, y0, y1, m: int = 32, max_m: int = 1024) -> int:
    """Zeros of ``fn`` inside the rectangle, by the argument principle on its boundary."""
    while True:
        s = np.linspace(0, 1, m, endpoint=False)
        path = np.concatenate([
            x0 + (x1 - x0) * s + 1j * y0,
            x1 + 1j * (y0 + (y1 - y0) * s),
            x1 - (x1 - x0) * s + 1j * y1,
            x0 + 1j * (y1 - (y1 - y0) * s),
        ])
        vals = np.array(pmap(fn, path))
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < np.pi / 3 or 2 * m > max_m:
            return int(round(np.sum(steps) / (2 * np.pi)))
        m *= 2


def secant_zero(fn, z0: complex, z1: complex, tol: float = 1e-13, maxit: int = 60) -> complex:
    f0, f1 = fn(z0), fn(z1)
    for _ in range(maxit):
        if f1 == f0:
            break
        z2 = z1 - f1 * (z1 - z0) / (f1 - f0)
        z0, f0 = z1, f1
        z1, f1 = z2, fn(z2)
        if abs(z1 - z0) <= tol * max(1.0, abs(z1)):
            break
    return z1


def simplicity_fit(sig, z0: complex, delta: float, direction: complex = 1.0, k: int = 8) -> float:
    """``R^2`` of a linear fit of ``1 / sigma`` on ``z0 + h direction``, ``0 < |h| <= delta``."""
    h = np.concatenate([np.linspace(-delta, -delta / k, k), np.linspace(delta / k, delta, k)])
    y = np.array([1.0 / sig(z0 + hh * direction) for hh in h])
    A = np.vstack([np.ones_like(h), h]).T.astype(complex)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    tot = y - y.mean()
    ss_tot = float(np.sum(np.abs(tot) ** 2))
    if ss_tot == 0:
        return 0.0
    return 1.0 - float(np.sum(np.abs(res) ** 2)) / ss_tot


def contour_residue(sig, z0: complex, radius: float, m: int = 64) -> complex:
    theta = 2 * np.pi * np.arange(m) / m
    w = radius * np.exp(1j * theta)
    return complex(np.mean([sig(z0 + v) * v for v in w]))


def _probe_candidate(kernel, z0, f, g, n, winding, scale):
    sig = lambda z: sigma_at(kernel, z, f, g, n)  # noqa: E731
    delta = 1e-4 * max(1.0, scale)
    r2 = simplicity_fit(sig, z0, delta)
    res = contour_residue(sig, z0, 10 * delta)
    return PoleCandidate(complex(z0), winding, bool(r2 > 0.999), r2, res)


def analytic_continuation_probe(kernel: SmoothKernel, region, f, g, n: int = 60,
                                grid=(21, 21), cells=(4, 4)) -> ContinuationMap:
    """``sigma`` on a grid over ``region = (xmin, xmax, ymin, ymax)`` plus pole candidates."""
    _check_region(kernel, region)
    x0, x1, y0, y1 = region
    xs = np.linspace(x0, x1, grid[0])
    ys = np.linspace(y0, y1, grid[1]) if y1 > y0 else np.array([y0])
    Z = xs[None, :] + 1j * ys[:, None]

    def point(z):
        op = nystrom_build(kernel, z, n)
        d = fredholm_det(op)
        try:
            s = resolvent_bilinear(op, f, g)
        except NearSingular:
            s = complex("nan")
        return s, d

    vals = pmap(point, Z.ravel())
    S = np.array([v[0] for v in vals]).reshape(Z.shape)
    D = np.array([v[1] for v in vals]).reshape(Z.shape)

    cands = []
    if y1 > y0:
        dfn = lambda z: det_at(kernel, z, n)  # noqa: E731
        cx = np.linspace(x0, x1, cells[0] + 1)
        cy = np.linspace(y0, y1, cells[1] + 1)
        for i in range(cells[0]):
            for j in range(cells[1]):
                w = winding_number(dfn, cx[i], cx[i + 1], cy[j], cy[j + 1])
                if w <= 0:
                    continue
                c = complex((cx[i] + cx[i + 1]) / 2, (cy[j] + cy[j + 1]) / 2)
                z = secant_zero(dfn, c, c + 1e-3)
                cands.append(_probe_candidate(kernel, z, f, g, n, w, abs(z)))
    return ContinuationMap(Z, S, D, tuple(cands), tuple(region), n)


def real_pole_scan(kernel: SmoothKernel, f, g, a: float, b: float, n: int = 60,
                   samples: int = 120) -> tuple:
    """Sign changes of the real determinant on ``(a, b)``; each is probed as a pole of ``sigma``."""
    xs = np.linspace(a, b, samples + 1)[1:]
    ds = np.array(pmap(lambda v: det_at(kernel, v, n).real, xs))
    out = []
    for k in range(len(xs) - 1):
        if ds[k] == 0 or ds[k] * ds[k + 1] < 0:
            root = brentq(lambda v: det_at(kernel, v, n).real, xs[k], xs[k + 1], xtol=1e-14)
            sig = lambda z: sigma_at(kernel, z, f, g, n)  # noqa: E731
            delta = 1e-4 * max(1.0, root)
            r2 = simplicity_fit(sig, root, delta)
            res = contour_residue(sig, root, 10 * delta)
            out.append(PoleCandidate(complex(root), 1, bool(r2 > 0.999), r2, res))
    return tuple(out)
