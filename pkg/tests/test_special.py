from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import OutOfDomain
from merostat.fredholm.sigma import chebyshev_derivatives
from merostat.special import (
    CONTRACTS,
    airy_ai,
    airy_aip,
    bessel_entire,
    bessel_phi,
    bessel_psi,
    besselj,
    eval_special,
    sinc,
)

mpmath.mp.dps = 40


def test_trivial_values():
    assert besselj(0.0, 0.0) == 1.0
    assert sinc(0.0) == 1.0
    np.testing.assert_allclose(sinc(np.array([1e-9, 0.5])), [1.0, 2 / np.pi], rtol=1e-15)


def test_half_order_exact_series_oracle():
    # J_{1/2}(2) = pi^{-1/2} sum_k (-1)^k 2^{k+1} / (k! (2k+1)!!), summed in rationals
    total, fact, dfact = Fraction(0), 1, 1
    for k in range(60):
        if k:
            fact *= k
            dfact *= 2 * k + 1
        total += Fraction((-1) ** k * 2 ** (k + 1), fact * dfact)
    # the alternating tail after 60 terms is below its first omitted term, far under 1e-40
    ref = mpmath.mpf(total.numerator) / total.denominator / mpmath.sqrt(mpmath.pi)
    assert abs(besselj(0.5, 2.0) - float(ref)) <= 1e-12 * abs(float(ref))


def _envelope_error(alpha, x):
    if alpha < 0 and x == 0:
        return 0.0  # J_alpha(0) is infinite; checked separately
    ref = float(mpmath.besselj(alpha, x))
    env = max(abs(ref), np.sqrt(2 / (np.pi * x)) if x > 0 else 1.0)
    return abs(besselj(alpha, x) - ref) / env


def test_besselj_contract_grid():
    bound = CONTRACTS["besselj"].bound
    worst = 0.0
    for alpha in (-0.9, -0.5, 0.0, 0.3, 1.0, 2.5, 5.0, 10.0):
        for x in np.concatenate([np.linspace(0.0, 10, 41), np.linspace(10, 100, 46)]):
            worst = max(worst, _envelope_error(alpha, x))
    assert worst <= bound


@given(st.floats(-0.99, 10.0), st.floats(0.0, 100.0))
def test_besselj_contract_random(alpha, x):
    assert _envelope_error(alpha, x) <= CONTRACTS["besselj"].bound


@given(st.floats(0.01, 8.0), st.floats(0.1, 60.0))
def test_bessel_recurrence(alpha, x):
    lhs = besselj(alpha - 1, x) + besselj(alpha + 1, x)
    rhs = 2 * alpha / x * besselj(alpha, x)
    assert abs(lhs - rhs) < 1e-10


def test_besselj_out_of_domain():
    with pytest.raises(OutOfDomain):
        besselj(-1.5, 1.0)
    with pytest.raises(OutOfDomain):
        besselj(0.5, -1.0)
    with pytest.raises(OutOfDomain):
        besselj(-0.5, 0.0)


def test_negative_argument_integer_order():
    np.testing.assert_allclose(besselj(1.0, -2.0), -besselj(1.0, 2.0), rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 3.0])
def test_psi_is_x_phi_prime(alpha):
    xs = np.linspace(0.2, 30, 25)
    h = 1e-4
    fd = (-bessel_phi(alpha, xs + 2 * h) + 8 * bessel_phi(alpha, xs + h)
          - 8 * bessel_phi(alpha, xs - h) + bessel_phi(alpha, xs - 2 * h)) / (12 * h)
    np.testing.assert_allclose(bessel_psi(alpha, xs), xs * fd, atol=1e-8)


def test_entire_part_matches_bessel():
    z = np.array([0.3, 2.0, 9.0])
    np.testing.assert_allclose(z ** 0.75 * bessel_entire(1.5, z), besselj(1.5, np.sqrt(z)), rtol=1e-13)


def test_airy_against_mpmath():
    xs = np.linspace(-10, 10, 201)
    ai = np.array([float(mpmath.airyai(v)) for v in xs])
    aip = np.array([float(mpmath.airyai(v, derivative=1)) for v in xs])
    np.testing.assert_allclose(airy_ai(xs), ai, rtol=0, atol=CONTRACTS["airy_ai"].bound)
    np.testing.assert_allclose(airy_aip(xs), aip, rtol=0, atol=CONTRACTS["airy_aip"].bound)


def test_airy_ode_by_chebyshev():
    x = -5 + 10 * (1 - np.cos(np.pi * np.arange(200) / 199)) / 2
    _, d2 = chebyshev_derivatives(x, airy_ai(x), 60)
    assert np.max(np.abs(d2 - x * airy_ai(x))) < 1e-9


def test_airy_complex_small_argument():
    z = 0.7 + 0.4j
    assert abs(airy_ai(z) - complex(mpmath.airyai(z))) < 1e-12


def test_dispatcher():
    assert eval_special("sinc", 0.0) == 1.0
    assert eval_special("besselj", 0.0, alpha=0.0) == 1.0
    np.testing.assert_allclose(eval_special("exp", 1.0), np.e)
    with pytest.raises(OutOfDomain):
        eval_special("gamma", 1.0)
    with pytest.raises(ValueError):
        eval_special("besselj", 1.0)
