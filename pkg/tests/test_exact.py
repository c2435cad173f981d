import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from merostat.errors import DimensionTooLarge
from merostat.exact import (
    RationalFunction,
    bareiss_determinant,
    exact,
    integer_spectrum,
    jordan_decomposition,
    ratfunc_roots_poles,
    residues,
    solve_possibly_singular,
)
from merostat.exact.algebra import characteristic_polynomial

x = sp.Symbol("x")
rho = sp.Symbol("rho")

small = st.integers(-4, 4)


def matrices(n):
    return st.lists(small, min_size=n * n, max_size=n * n).map(lambda v: sp.Matrix(n, n, v))


# ---------------------------------------------------------------------------
# scalars and spectra


def test_exact_parses_rationals_and_gaussian():
    assert exact("3/4") == sp.Rational(3, 4)
    assert exact("1+2i") == 1 + 2 * sp.I
    assert exact(0.5) == sp.Rational(1, 2)


def test_integer_spectrum_diagonal():
    s = integer_spectrum(sp.diag(-1, 0))
    assert dict(s.eigenvalues) == {-1: 1, 0: 1}
    assert s.all_integer


def test_integer_spectrum_is_rho_free():
    l1, l2 = 2, -3
    a = sp.Matrix([[l1, 5 + 7 * rho], [0, l2]])
    s = integer_spectrum(a)
    assert {ev for ev, _ in s.eigenvalues} == {l1, l2}


def test_integer_spectrum_rotation_not_integer():
    s = integer_spectrum(sp.Matrix([[0, 1], [-1, 0]]))
    assert {ev for ev, _ in s.eigenvalues} == {sp.I, -sp.I}
    assert not s.all_integer


def test_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        characteristic_polynomial(sp.eye(20))


@st.composite
def similar_to_jordan(draw):
    """``T J T^-1`` with unimodular integer ``T`` and known Jordan blocks."""
    sizes = draw(st.lists(st.integers(1, 2), min_size=1, max_size=2))
    blocks = [(draw(small), k) for k in sizes]
    from merostat.exact.algebra import jordan_matrix

    J = sp.Matrix(jordan_matrix(blocks))
    n = J.rows
    T = sp.eye(n)
    for _ in range(3):
        if n < 2:
            break
        i, j = draw(st.permutations(range(n)))[:2]
        E = sp.eye(n)
        E[i, j] = draw(small)
        T = T * E
    return T * J * T.inv(), blocks


@given(matrices(2))
def test_spectrum_multiplicities_and_charpoly_roots(a):
    s = integer_spectrum(a)
    assert sum(m for _, m in s.eigenvalues) == a.rows
    lam = s.charpoly.gens[0]
    for ev, _ in s.eigenvalues:
        assert sp.simplify(s.charpoly.as_expr().subs(lam, ev)) == 0


@given(similar_to_jordan())
def test_spectrum_of_similar_matrix(case):
    a, blocks = case
    s = integer_spectrum(a)
    want = {}
    for ev, k in blocks:
        want[ev] = want.get(ev, 0) + k
    assert dict(s.eigenvalues) == want
    assert s.all_integer


# ---------------------------------------------------------------------------
# Jordan form


def test_jordan_diagonal():
    jf = jordan_decomposition(sp.diag(2, 3))
    assert jf.transform == sp.eye(2)
    assert list(jf.blocks) == [(2, 1), (3, 1)]


def test_jordan_single_block():
    jf = jordan_decomposition(sp.Matrix([[1, 1], [0, 1]]))
    assert list(jf.blocks) == [(1, 2)]


def test_jordan_block_order_follows_diagonal():
    a = sp.Matrix([[1, 1], [0, 0]])
    jf = jordan_decomposition(a)
    assert list(jf.blocks) == [(1, 1), (0, 1)]
    T = sp.Matrix(jf.transform)
    assert T.inv() * a * T == sp.Matrix(jf.matrix)


@given(similar_to_jordan())
def test_jordan_reproduces_input(case):
    a, blocks = case
    jf = jordan_decomposition(a)
    assert jf.reproduces(a)
    assert sorted(jf.blocks) == sorted(blocks)


# ---------------------------------------------------------------------------
# linear systems


def test_solve_singular_nullspace():
    M = -sp.eye(2) - sp.diag(-1, 0)
    sol = solve_possibly_singular(M, sp.zeros(2, 1))
    assert [list(v) for v in sol.nullspace] == [[1, 0]]


def test_solve_infeasible():
    assert solve_possibly_singular(sp.zeros(2, 2), sp.Matrix([1, 0])) is None


def test_solve_resonant_second_order_instance():
    # the resonance condition with alpha0=1, beta0=0, gamma_{-2}=1, gamma_{-1}=1 is solvable because 1*(1-0) = 1
    g2, g1, a0, b0 = 1, 1, 1, 0
    M = sp.Matrix([[0, g2], [0, -1]])
    rhs = sp.Matrix([g1, -(a0 - b0)])
    assert solve_possibly_singular(M, rhs) is not None


@given(matrices(3), st.lists(small, min_size=3, max_size=3))
def test_solve_invariants(M, v):
    rhs = M * sp.Matrix(v)
    sol = solve_possibly_singular(M, rhs)
    assert sol is not None
    assert sp.expand(M * sol.particular - rhs) == sp.zeros(3, 1)
    for n in sol.nullspace:
        assert sp.expand(M * n) == sp.zeros(3, 1)


def test_bareiss_matches_sympy_det():
    M = sp.Matrix([[1 + x, 2, x**2], [x, 3, 1], [0, x, 2 - x]])
    rows = [[sp.Poly(M[i, j], x, domain="QQ") for j in range(3)] for i in range(3)]
    assert bareiss_determinant(rows).as_expr() == sp.expand(M.det())


# ---------------------------------------------------------------------------
# rational functions


def test_roots_poles_examples():
    rp = ratfunc_roots_poles(RationalFunction(x))
    assert list(rp.zeros) == [(0, 1)] and not rp.poles
    rp = ratfunc_roots_poles(RationalFunction(x, x - 1))
    assert list(rp.zeros) == [(0, 1)] and list(rp.poles) == [(1, 1)]
    rp = ratfunc_roots_poles(RationalFunction(1))
    assert not rp.zeros and not rp.poles


def test_integer_coefficients_are_not_truncated():
    r = RationalFunction(240 * x**3 - 180, 64)
    assert r.num.as_expr() == sp.Rational(15, 4) * x**3 - sp.Rational(45, 16)


roots = st.lists(st.integers(-5, 5), min_size=1, max_size=3)


def _multiset(rp):
    out = {}
    for loc, m in list(rp.zeros):
        out[loc] = out.get(loc, 0) + m
    for loc, m in list(rp.poles):
        out[loc] = out.get(loc, 0) - m
    return {k: v for k, v in out.items() if v}


@given(roots, roots, roots, roots)
def test_roots_poles_of_product_is_union(z1, p1, z2, p2):
    def build(zs, ps):
        return RationalFunction(sp.prod([x - z for z in zs]), sp.prod([x - p for p in ps]))

    a, b = build(z1, p1), build(z2, p2)
    if a.is_zero or b.is_zero:
        return
    ma, mb, mab = _multiset(ratfunc_roots_poles(a)), _multiset(ratfunc_roots_poles(b)), _multiset(
        ratfunc_roots_poles(a * b))
    union = dict(ma)
    for k, v in mb.items():
        union[k] = union.get(k, 0) + v
    assert mab == {k: v for k, v in union.items() if v}


def test_residues_of_simple_poles():
    r = RationalFunction.from_expr(1 / (x**2 - 1))
    got = {sp.expand(fr.factor.as_expr()): fr.constant for fr in residues(r)}
    assert got == {x - 1: sp.Rational(1, 2), x + 1: sp.Rational(-1, 2)}
