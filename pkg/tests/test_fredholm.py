import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import InvalidRegion, NearSingular
from merostat.fredholm import (
    SmoothKernel,
    fredholm_det,
    fredholm_det_eig,
    nystrom_build,
    operator_norm,
    resolvent_bilinear,
)
from merostat.fredholm.continuation import winding_number
from merostat.fredholm.quadrature import (
    bessel_kernel_closed,
    gauss_jacobi01,
    gauss_legendre01,
    interval_operator,
    resolvent_kernel,
    solve_at,
)


def one(u):
    return np.ones(np.shape(u), dtype=complex)


# quadrature rules


def test_gauss_legendre_integrates_polynomials():
    u, w = gauss_legendre01(10)
    for k in range(20):
        assert np.sum(w * u**k) == pytest.approx(1 / (k + 1), rel=1e-13)


@pytest.mark.parametrize("alpha", [-0.5, 0.5, 1.5])
def test_gauss_jacobi_moments(alpha):
    u, w = gauss_jacobi01(12, alpha)
    for k in range(10):
        assert np.sum(w * u**k) == pytest.approx(1 / (k + alpha + 1), rel=1e-12)


# discretized operator


def test_zero_kernel_is_identity():
    op = nystrom_build(SmoothKernel.sine(0.0), 2.0, 20)
    np.testing.assert_array_equal(op.matrix, 0)
    assert fredholm_det(op) == 1
    assert resolvent_bilinear(op, one, one) == pytest.approx(2.0, abs=1e-14)


def test_sine_kernel_diagonal_is_gamma():
    k = SmoothKernel.sine(-0.7)
    x = np.linspace(0, 3, 7)
    np.testing.assert_allclose(k(x, x), -0.7, atol=1e-15)


@pytest.mark.parametrize("c", [0.5, -0.3, 2.0])
@pytest.mark.parametrize("xi", [0.5, 1.0, 2.5])
def test_constant_kernel_closed_form(c, xi):
    op = nystrom_build(SmoothKernel.custom(lambda x, t: c * np.ones(np.shape(x))), xi, 16)
    assert fredholm_det(op) == pytest.approx(1 + c * xi, abs=1e-13)
    assert resolvent_bilinear(op, one, one) == pytest.approx(xi / (1 + c * xi), abs=1e-13)


def test_grid_doubling_changes_det_little():
    k = SmoothKernel.sine(-1.0)
    d40 = fredholm_det(nystrom_build(k, 2.0, 40))
    d80 = fredholm_det(nystrom_build(k, 2.0, 80))
    assert abs(d40 - d80) < 1e-10


@given(st.floats(0.05, 4.0), st.floats(-1.0, 1.0))
def test_eigenvalue_det_matches_elimination(xi, gamma):
    op = nystrom_build(SmoothKernel.sine(gamma), xi, 30)
    assert abs(fredholm_det(op) - fredholm_det_eig(op)) < 1e-10


@given(st.floats(0.05, 4.0), st.floats(-0.999, 0.0))
def test_positive_definite_for_contractive_gamma(xi, gamma):
    op = nystrom_build(SmoothKernel.sine(gamma), xi, 30)
    assert np.min(np.linalg.eigvalsh(op.system)) > 0
    assert operator_norm(op) <= abs(gamma) + 1e-12


def test_neumann_series_oracle():
    # independent rule: numpy Gauss-Legendre on (0, xi), Neumann sum instead of a solve
    gamma, xi = -1.0, 0.1
    u, w = np.polynomial.legendre.leggauss(24)
    x, w = xi * (u + 1) / 2, xi * w / 2
    K = gamma * np.sinc(x[:, None] - x[None, :])
    term, total = np.ones_like(x), 0.0
    for j in range(30):
        total += (-1) ** j * np.sum(w * term)
        term = K @ (w * term)
    op = nystrom_build(SmoothKernel.sine(gamma), xi, 20)
    assert resolvent_bilinear(op, one, one).real == pytest.approx(total, abs=1e-14)


@pytest.mark.parametrize("xi", [0.02, 0.05, 0.1])
def test_small_interval_det(xi):
    d = fredholm_det(nystrom_build(SmoothKernel.sine(-1.0), xi, 20)).real
    assert abs(d - (1 - xi)) < xi**4


def test_real_sigma_is_real():
    op = nystrom_build(SmoothKernel.sine(-1.0), 1.3, 30)
    assert op.is_real
    assert abs(resolvent_bilinear(op, one, one).imag) < 1e-10


def test_resolvent_kernel_symmetric():
    op = interval_operator(SmoothKernel.sine(-1.0), -1.0, 1.0, 40)
    assert resolvent_kernel(op, 0.3, -0.6) == pytest.approx(resolvent_kernel(op, -0.6, 0.3), abs=1e-12)


def test_solve_at_satisfies_equation():
    # u + int k u = f at an off-node point
    k = SmoothKernel.sine(-0.8)
    op = nystrom_build(k, 1.5, 40)
    x0 = 0.77
    u0 = solve_at(op, one, x0)
    us = np.array([solve_at(op, one, xx) for xx in op.nodes])
    lhs = u0 + np.sum(op.weights * k(np.full(op.n, x0), op.nodes) * us)
    assert lhs == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
def test_bessel_integral_matches_closed_form(alpha):
    k = SmoothKernel.bessel(1.0, alpha)
    for x, t in [(0.3, 1.7), (2.0, 0.5), (4.0, 3.0)]:
        assert complex(k(np.array(x), np.array(t))).real == pytest.approx(
            bessel_kernel_closed(alpha, x, t), abs=1e-12)


def test_airy_kernel_symmetric_and_continuous_on_diagonal():
    k = SmoothKernel.airy(1.0)
    x = np.array([0.1, 0.5, 1.2])
    np.testing.assert_allclose(k(x, x + 0.3), k(x + 0.3, x), atol=1e-14)
    np.testing.assert_allclose(k(x, x + 1e-7), k(x, x), atol=1e-6)


def test_near_singular_raises():
    # D vanishes near xi = 0.778 for gamma = -1.5; a solve at the zero must refuse
    from scipy.optimize import brentq

    k = SmoothKernel.sine(-1.5)
    root = brentq(lambda v: fredholm_det(nystrom_build(k, v, 40)).real, 0.5, 1.0, xtol=1e-15)
    with pytest.raises(NearSingular):
        resolvent_bilinear(nystrom_build(k, root, 40), one, one)


def test_bessel_cut_rejected():
    with pytest.raises(InvalidRegion):
        nystrom_build(SmoothKernel.bessel(-1.0, 0.5), -1.0, 20)
    nystrom_build(SmoothKernel.bessel(-1.0, 1.0), -1.0 + 0j, 20)  # integer order is entire


def test_small_n_rejected():
    with pytest.raises(ValueError):
        nystrom_build(SmoothKernel.sine(1.0), 1.0, 4)


# argument principle


def test_winding_counts_polynomial_zeros():
    p = lambda z: (z - 0.5) * (z - 1j) * (z + 2)  # noqa: E731
    assert winding_number(p, 0, 1, -0.5, 0.5) == 1
    assert winding_number(p, -3, 1, -2, 2) == 3
    assert winding_number(p, 2, 3, 2, 3) == 0
