import random

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import Infeasible, NoIntegerEigenvalue, UnsupportedPoleOrder
from merostat.exact import integer_spectrum
from merostat.singular import (
    GaugeTransform,
    LaurentMatrix,
    Reason,
    Verdict,
    forward_recurrence,
    gauge_transform,
    inverse_recurrence,
    katsnelson_volok_check,
    reduce_to_min_spectrum,
    second_order_pole_check,
    shearing_step,
    strong_regularity_classify,
)
from merostat.singular.classify import katsnelson_volok_solution
from merostat.singular.oracles import diagonal_perturbation, oracle_suite, oracle_system, shifted_residue
from merostat.singular.recurrence import recurrence_residual

al, be = sp.symbols("alpha beta")


def lm(terms, k_max=None):
    return LaurentMatrix.from_dict({k: sp.Matrix(v) for k, v in terms.items()}, k_max)


def second_order_family(g2, g1, a0, b0):
    """``[[a0, g2/t^2 + g1/t], [0, b0]]``."""
    return lm({-2: [[0, g2], [0, 0]], -1: [[0, g1], [0, 0]], 0: [[a0, 0], [0, b0]]})


def spectrum(A):
    return sorted(integer_spectrum(sp.Matrix(A.coeff(-1))).multiset(), key=sp.default_sort_key)


# ---------------------------------------------------------------------------
# Laurent arithmetic


def test_product_with_inverse_is_identity():
    W = lm({-1: [[0, 1], [0, 0]], 0: [[1, 0], [0, 1]]})
    P = W @ W.inverse()
    assert P.equals(LaurentMatrix.identity(2))


def test_truncated_series_refuses_unknown_orders():
    A = lm({-1: [[1, 0], [0, 0]]}, k_max=2)
    with pytest.raises(Exception):
        A.coeff(3)


# ---------------------------------------------------------------------------
# gauge transforms


def test_identity_gauge_is_trivial():
    A = second_order_family(1, 1, 2, 1)
    assert gauge_transform(A, GaugeTransform.constant(sp.eye(2))).equals(A)


def test_double_pole_gauge_gives_first_order():
    g2, g1, a0, b0 = sp.symbols("g2 g1 a0 b0")
    A = second_order_family(g2, g1, a0, b0)
    B = gauge_transform(A, GaugeTransform.diagonal_monomials([-1, 0]))
    assert sp.Matrix(B.coeff(-1)) == sp.Matrix([[1, g2], [0, 0]])
    assert sp.Matrix(B.coeff(0)) == sp.Matrix([[a0, g1], [0, b0]])


# ---------------------------------------------------------------------------
# recurrences


def test_forward_scalar_pole():
    sols = forward_recurrence(lm({-1: -sp.eye(2)}), 4)
    assert [s.m for s in sols] == [-1]
    assert sols[0].dimension == 2


def test_forward_katsnelson_volok_family():
    A = lm({-1: [[-1, 0], [0, 0]], 0: [[al, 0], [0, be]]})
    sols = forward_recurrence(A, 4, m=-1)
    assert all(recurrence_residual(A, s) for s in sols)
    b_m1, b_0 = katsnelson_volok_solution(sp.Matrix([[-1, 0], [0, 0]]), sp.diag(al, be), sp.Matrix([-1, 0]))
    assert sp.Matrix(sols[0].leading) == b_m1
    assert sp.Matrix(sols[0].series.coeff(0)) == b_0


def test_forward_resonance_infeasible():
    A = gauge_transform(second_order_family(1, 1, 0, 0), GaugeTransform.diagonal_monomials([-1, 0]))
    with pytest.raises(Infeasible):
        forward_recurrence(A, 4, m=0)


def test_inverse_scalar_pole():
    sols = inverse_recurrence(lm({-1: -sp.eye(2)}), 4)
    assert [s.m for s in sols] == [1]
    assert sols[0].dimension == 2


def test_inverse_chains():
    A = lm({-1: [[-1, 0], [0, 0]]})
    sols = inverse_recurrence(A, 4)
    assert sorted(s.m for s in sols) == [0, 1]


def test_no_integer_eigenvalue():
    with pytest.raises(NoIntegerEigenvalue):
        forward_recurrence(lm({-1: sp.diag(sp.Rational(1, 2), sp.Rational(1, 3))}), 3)


@pytest.mark.parametrize("s", oracle_suite(5, seed=11))
def test_recurrence_solutions_satisfy_the_system(s):
    for sol in forward_recurrence(s.A, 5) + inverse_recurrence(s.A, 5):
        assert recurrence_residual(s.A, sol)


# ---------------------------------------------------------------------------
# shearing


def test_shear_lowers_target():
    A = lm({-1: sp.diag(0, 2)})
    assert spectrum(shearing_step(A)) == [0, 1]


def test_shear_three_times_reaches_zero():
    A = lm({-1: sp.diag(0, 3)})
    for _ in range(3):
        A = shearing_step(A)
    assert spectrum(A) == [0, 0]


def test_shear_single_jordan_block():
    A = lm({-1: [[1, 1], [0, 1]]})
    assert spectrum(shearing_step(A)) == [0, 1]


@pytest.mark.parametrize("diag, want", [
    ((0, 0), [0, 0]),
    ((0, 2), [0, 0]),
    ((sp.Rational(1, 2), 3, 1), [sp.Rational(1, 2), 1, 1]),
])
def test_reduce_to_min_spectrum(diag, want):
    assert spectrum(reduce_to_min_spectrum(lm({-1: sp.diag(*diag)}))) == sorted(want, key=sp.default_sort_key)


@given(st.lists(st.integers(-2, 3), min_size=2, max_size=3),
       st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_shearing_spectrum_law(evs, a0):
    n = len(evs)
    A = lm({-1: sp.diag(*evs), 0: sp.Matrix(n, n, a0[: n * n])})
    top = max(evs)
    got = spectrum(shearing_step(A))
    want = sorted(evs)
    want[want.index(top)] = top - 1
    assert got == sorted(want)


# ---------------------------------------------------------------------------
# classification


def test_non_integer_residue_rejected():
    rep = strong_regularity_classify(lm({-1: sp.diag(sp.Rational(1, 2), 0), 0: [[1, 2], [3, 4]]}))
    assert rep.verdict is Verdict.NOT_STRONG_REGULAR
    assert rep.reason is Reason.NON_INTEGER_EIGENVALUE


def test_explicit_witness_double_pole():
    # W = [[1, 1/t], [0, 1]] gives A = [[0, -1/t^2], [0, 0]]
    rep = strong_regularity_classify(lm({-2: [[0, -1], [0, 0]]}))
    assert rep.strong_regular


@pytest.mark.parametrize("g2, g1, a0, b0, ok", [(1, 2 - 1, 2, 1, True), (1, 1, 0, 0, False), (5, 0, 1, 1, True)])
def test_second_order_family(g2, g1, a0, b0, ok):
    A = second_order_family(g2, g1, a0, b0)
    assert second_order_pole_check(A) is ok
    assert strong_regularity_classify(A).strong_regular is ok


def test_second_order_condition_fails():
    assert second_order_pole_check(second_order_family(5, 1, 1, 1)) is False


def test_third_order_pole_unsupported():
    with pytest.raises(UnsupportedPoleOrder):
        strong_regularity_classify(lm({-3: [[0, 1], [0, 0]]}))


def test_katsnelson_volok():
    assert katsnelson_volok_check(sp.zeros(2), sp.Matrix([[1, 2], [3, 4]]))
    assert katsnelson_volok_check(sp.Matrix([[-1, 0], [0, 0]]), sp.diag(al, be))
    assert not katsnelson_volok_check(sp.Matrix([[-1, 0], [0, 0]]), sp.Matrix([[0, 0], [1, 0]]))


def _witness_identity(rep):
    W, Winv = rep.witness
    P = W.series @ Winv.series
    return all(sp.Matrix(P.coeff(k)) == (sp.eye(P.n) if k == 0 else sp.zeros(P.n))
               for k in range(P.low, rep.K + 1))


def test_oracle_suite_all_strong_regular():
    for s in oracle_suite(12, seed=3):
        rep = strong_regularity_classify(s.A)
        assert rep.strong_regular
        assert _witness_identity(rep)
        ints = rep.residue_spectrum
        if not rep.extra["scalar_residue"]:
            assert rep.extra["two_distinct_integer_eigenvalues"]
        assert all(ev.is_Integer for ev, _ in ints)


@given(st.integers(0, 10_000), st.sampled_from(["1/2", "1/3", "-2/5", "7/4"]))
def test_non_integer_perturbations_rejected(seed, delta):
    s = oracle_system(random.Random(seed), 2)
    for B in (shifted_residue(s.A, delta), diagonal_perturbation(s.A, [delta, 0])):
        if B.is_zero or B.low >= -1:
            assert strong_regularity_classify(B).reason is Reason.NON_INTEGER_EIGENVALUE


@given(st.integers(0, 10_000), st.lists(st.integers(-3, 3), min_size=1, max_size=1))
def test_constant_gauge_invariance(seed, c):
    s = oracle_system(random.Random(seed), 2)
    if s.A.is_zero or s.A.low < -1:
        return
    T = sp.Matrix([[1, c[0]], [0, 1]]) * sp.Matrix([[2, 0], [1, 1]])
    B = gauge_transform(s.A, GaugeTransform.constant(T))
    assert strong_regularity_classify(B).verdict == strong_regularity_classify(s.A).verdict
