import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import GridTooCoarse
from merostat.fredholm import ode_residual, parity_split, sigma_p3, sigma_p5, sigma_p5_routes
from merostat.fredholm.sigma import (
    SigmaTrace,
    bessel_norm_bound,
    central_fd4,
    complex_step,
    fd4_derivatives,
    q_r_functions,
    sigma_trace_p3,
    sigma_trace_p5,
    triangular_q,
)


# derivative helpers


def test_complex_step_exact_for_analytic_function():
    assert complex_step(np.sin, 0.4) == pytest.approx(np.cos(0.4), abs=1e-15)


def test_fd4_derivatives_fourth_order():
    errs = []
    for m in (80, 160):
        x = np.linspace(0, 2, m)
        d1, d2 = fd4_derivatives(x, np.exp(x))
        errs.append(max(np.max(np.abs(d1 - np.exp(x))), np.max(np.abs(d2 - np.exp(x)))))
    assert errs[1] < errs[0] / 8
    assert central_fd4(np.exp, 1.0, 1e-3) == pytest.approx(np.e, abs=1e-11)


# Painleve V sigma


def test_sigma_p5_small_x():
    x = 1e-3
    assert abs(sigma_p5(x) + x / np.pi) < x**2


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0])
def test_three_routes_agree(x):
    assert sigma_p5_routes(x).max_discrepancy < 1e-9


def test_q_r_at_origin():
    assert q_r_functions(0.0) == (1, 1, 1)


@pytest.mark.parametrize("t", [0.3, 0.7, 1.2])
def test_q_r_identities(t):
    q2, _, _ = q_r_functions(2 * t)
    _, r, _ = q_r_functions(t)
    assert q2 == pytest.approx(r * np.exp(1j * np.pi * t), abs=1e-12)
    dtR = central_fd4(lambda s: s * q_r_functions(s)[2], t, 1e-3)
    assert dtR == pytest.approx(abs(r) ** 2, rel=1e-9)


def test_triangular_q_converges():
    t = 1.0
    errs = []
    for n in (64, 128):
        nodes, q = triangular_q(t, n)
        idx = slice(n // 2, None, max(1, n // 16))
        exact = np.array([q_r_functions(s, 60)[0] for s in nodes[idx]])
        errs.append(np.max(np.abs(q[idx] - exact)))
    assert errs[1] < errs[0]


def test_sigma_p5_grid_doubling():
    assert abs(sigma_p5(2.0, 60) - sigma_p5(2.0, 120)) < 1e-12


@given(st.floats(0.2, 5.0), st.floats(-1.0, 1.0))
def test_sigma_p5_schwarz_symmetry(re, im):
    z = complex(re, im)
    assert abs(sigma_p5(z.conjugate(), 40) - np.conj(sigma_p5(z, 40))) < 1e-12


# parity split


@pytest.mark.parametrize("gamma,t", [(-1.0, 0.8), (-0.5, 1.5), (0.7, 0.4)])
def test_parity_product_and_h2(gamma, t):
    p = parity_split(gamma, t)
    assert p.product_error < 1e-12
    assert p.ratio == pytest.approx(p.h2_direct, rel=1e-10)
    assert p.h2_direct == pytest.approx(p.h2_symmetric, rel=1e-10)


def test_parity_trivial_gamma():
    p = parity_split(0.0, 1.0)
    assert (p.D, p.D_plus, p.D_minus, p.h2_direct) == (1, 1, 1, 1)


# Bessel kernel and Painleve III


@pytest.mark.parametrize("gamma,alpha,xi", [(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (0.5, 1.0, 3.0), (-1.0, -0.5, 5.0)])
def test_bessel_norm_bound(gamma, alpha, xi):
    norm, ok = bessel_norm_bound(gamma, alpha, xi)
    assert ok and norm <= abs(gamma) + 1e-8


def test_sigma_p3_alpha_zero_is_linear():
    for s in (0.5, 2.0, 6.0):
        assert sigma_p3(s, 0.0).sigma == pytest.approx(s / 4, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
def test_sigma_p3_identities(alpha):
    s = 2.0
    p = sigma_p3(s, alpha)
    assert p.sigma == pytest.approx(p.sigma_diag, abs=1e-12)
    assert p.R == pytest.approx(p.R_logdet, abs=1e-12)
    dsR = central_fd4(lambda v: v * sigma_p3(v, alpha).R, s, 1e-3)
    assert dsR == pytest.approx(p.q**2 / 4, abs=1e-9)


def test_sigma_p3_vanishes_at_origin():
    assert abs(sigma_p3(1e-4, 1.0).sigma) < 1e-6
    with pytest.raises(ValueError):
        sigma_p3(0.0, 1.0)


# traces and residuals


def test_residual_of_zero_trace_is_zero():
    x = np.linspace(1, 2, 64)
    tr = ode_residual(SigmaTrace(x, np.zeros(64)))
    np.testing.assert_array_equal(tr.residual, 0)


def test_residual_requires_64_points():
    x = np.linspace(1, 2, 63)
    with pytest.raises(GridTooCoarse):
        ode_residual(SigmaTrace(x, np.zeros(63)))


def test_residual_flags_wrong_function():
    x = np.linspace(0.5, 3, 100)
    assert ode_residual(SigmaTrace(x, np.sin(x))).max_residual() > 1e-2


def test_p5_trace_residual_small_and_converges():
    coarse = sigma_trace_p5(0.5, 4.0, 100)
    fine = sigma_trace_p5(0.5, 4.0, 200)
    assert fine.max_residual() < 1e-6
    assert fine.max_residual() < coarse.max_residual() / 8


def test_p5_trace_chebyshev_scheme():
    tr = sigma_trace_p5(0.5, 4.0, 80, grid="chebyshev", scheme="chebyshev")
    assert tr.max_residual() < 1e-7


def test_p3_trace_residual_small():
    assert sigma_trace_p3(0.5, 5.0, 200, 0.5).max_residual() < 1e-5
