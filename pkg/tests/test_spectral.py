import random

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import ExpansionUnavailable
from merostat.singular import strong_regularity_classify
from merostat.spectral import (
    RHO,
    MatrixPencil,
    MeromorphicHandle,
    canonical_from_r,
    pencil_integer_check,
    r_condition_check,
    tangent_handle,
    theorem_consistency,
)

x = sp.Symbol("x")


# ---------------------------------------------------------------------------
# pencils


def two_root_pencil(l1, l2):
    return MatrixPencil({-1: sp.Matrix([[l1, 3], [0, l2]])}, {-1: sp.Matrix([[0, 5], [0, 0]])})


def test_two_root_pencil():
    rep = pencil_integer_check(two_root_pencil(2, -1))
    assert rep.passes and rep.rho_free
    assert {ev for ev, _ in rep.spectrum} == {2, -1}


def test_pencil_without_q_part():
    rep = pencil_integer_check(MatrixPencil({-1: sp.diag(1, 4)}, {-1: sp.zeros(2)}))
    assert rep.passes


def test_pencil_rho_dependent_spectrum():
    rep = pencil_integer_check(MatrixPencil({-1: sp.zeros(2)}, {-1: sp.Matrix([[0, 1], [1, 0]])}))
    assert not rep.passes and not rep.rho_free


def test_pencil_sampled_route_agrees():
    rep = pencil_integer_check(two_root_pencil(2, -1), rho_samples=[0.5, 1 + 1j, -2 + 0.25j])
    assert rep.passes and rep.method == "sampled"


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.booleans())
def test_pencil_conjugation_invariance(l1, l2, c, swap):
    pen = two_root_pencil(l1, l2)
    if swap:
        pen = MatrixPencil(pen.p, {-1: sp.Matrix([[0, 0], [1, 0]])})
    T = sp.Matrix([[1, c], [0, 1]]) * sp.Matrix([[1, 0], [1, 1]])
    a, b = pencil_integer_check(pen), pencil_integer_check(pen.conjugate(T))
    assert a.passes == b.passes and a.rho_free == b.rho_free


# ---------------------------------------------------------------------------
# r-condition


def test_r_equals_x_passes():
    rep = r_condition_check(MeromorphicHandle.from_rational(x))
    assert rep.passes and len(rep.points) == 1


def test_tan_passes():
    h = tangent_handle(3)
    assert len(h.roots) == 7 and len(h.poles) == 7
    assert r_condition_check(h).passes


def test_r3_fails_with_second_derivative_minus_two():
    rep = r_condition_check(MeromorphicHandle.from_rational(x / (x - 1)))
    assert not rep.passes
    root = next(p for p in rep.points if p.kind == "root")
    assert root.second == -2


@pytest.mark.parametrize("d", range(2, 7))
def test_polynomials_of_degree_two_or_more_fail(d):
    assert not r_condition_check(MeromorphicHandle.from_rational(x**d)).passes


def test_random_r3_r4_family_fails():
    rng = random.Random(7)
    for _ in range(20):
        l1, l2, mu = rng.sample(range(-9, 10), 3)
        for e in ((x - l1) / (x - l2), (x - l1) * (x - l2) / (x - mu)):
            assert not r_condition_check(MeromorphicHandle.from_rational(e)).passes


# ---------------------------------------------------------------------------
# canonical systems


def test_canonical_r_x_is_strong_regular():
    A = canonical_from_r(MeromorphicHandle.from_rational(x), 0, rho=1)
    assert sp.Matrix(A.coeff(-2)) == sp.Matrix([[0, 1], [0, 0]])
    for rho in (1, sp.I, 2 - 3 * sp.I):
        assert strong_regularity_classify(canonical_from_r(MeromorphicHandle.from_rational(x), 0, rho)).strong_regular


def test_canonical_r_x_squared_rejected():
    h = MeromorphicHandle.from_rational(x**2)
    assert all(c.consistent and c.verdict != "StrongRegular" for c in theorem_consistency(h))


def test_canonical_needs_declared_point():
    with pytest.raises(ExpansionUnavailable):
        canonical_from_r(MeromorphicHandle.from_rational(sp.Integer(1)), 0)


@pytest.mark.parametrize("expr", [x, x / (x - 1), (x - 1) * (x + 2) / (x - 3), x * (x**2 - 3) / (3 * x**2 - 1)])
def test_theorem_iff_on_rational_examples(expr):
    checks = theorem_consistency(MeromorphicHandle.from_rational(expr))
    assert checks and all(c.consistent for c in checks)


def test_theorem_iff_on_tangent():
    checks = theorem_consistency(tangent_handle(1))
    assert checks and all(c.consistent for c in checks)
    assert all(c.verdict == "StrongRegular" for c in checks)
