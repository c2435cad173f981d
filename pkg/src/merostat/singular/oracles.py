"""Systems with a known Laurent fundamental solution, for testing the classifier.

``W = P1 t^D P2`` with unipotent polynomial factors ``P1, P2`` and an integer
diagonal ``D`` has a Laurent-polynomial inverse, so ``A = W' W^{-1}`` is strong
regular at ``t = 0`` by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import sympy as sp

from .laurent import LaurentMatrix

_t = sp.Symbol("t")


@dataclass(frozen=True)
class OracleSystem:
    A: LaurentMatrix
    W: sp.Matrix  # entries are Laurent polynomials in t
    W_inv: sp.Matrix
    D: tuple


def _unipotent(n: int, rng: random.Random, factors: int, max_deg: int) -> tuple[sp.Matrix, sp.Matrix]:
    P, Pinv = sp.eye(n), sp.eye(n)
    for _ in range(factors):
        i, j = rng.sample(range(n), 2)
        c = sp.Rational(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        E = sp.eye(n)
        E[i, j] = c * _t ** rng.randint(0, max_deg)
        Einv = sp.eye(n)
        Einv[i, j] = -E[i, j]
        P, Pinv = P * E, Einv * Pinv
    return P, Pinv


def laurent_from_matrix(m: sp.Matrix, center=0) -> LaurentMatrix:
    """Exact ``LaurentMatrix`` of a matrix of Laurent polynomials in ``t``."""
    terms: dict[int, sp.Matrix] = {}
    for i in range(m.rows):
        for j in range(m.cols):
            e = sp.expand(m[i, j])
            if e == 0:
                continue
            for term in sp.Add.make_args(e):
                c, k = term.as_coeff_exponent(_t)
                k = int(k)
                terms.setdefault(k, sp.zeros(*m.shape))[i, j] += c
    if not terms:
        return LaurentMatrix(0, [], None, center, m.shape)
    return LaurentMatrix.from_dict(terms, None, center)


def oracle_system(rng: random.Random, n: int, max_exp: int = 2, factors: int = 3,
                  max_deg: int = 2) -> OracleSystem:
    P1, P1i = _unipotent(n, rng, factors, max_deg)
    P2, P2i = _unipotent(n, rng, factors, max_deg)
    D = tuple(rng.randint(-max_exp, max_exp) for _ in range(n))
    tD = sp.diag(*[_t**d for d in D])
    tDi = sp.diag(*[_t ** (-d) for d in D])
    W = (P1 * tD * P2).expand()
    Wi = (P2i * tDi * P1i).expand()
    A = (W.diff(_t) * Wi).expand()
    return OracleSystem(laurent_from_matrix(A), W, Wi, D)


def oracle_suite(count: int = 50, seed: int = 0, sizes=(2, 3)) -> list[OracleSystem]:
    """``count`` systems whose coefficient has a pole of order exactly one at 0."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = oracle_system(rng, rng.choice(sizes))
        if not s.A.is_zero and s.A.low == -1:
            out.append(s)
    return out


def shifted_residue(A: LaurentMatrix, delta) -> LaurentMatrix:
    """``A + delta I / t``: every residue eigenvalue moves by ``delta``."""
    return A + LaurentMatrix.monomial(sp.Rational(delta) * sp.eye(A.n), -1, A.center)


def diagonal_perturbation(A: LaurentMatrix, entries) -> LaurentMatrix:
    """``A + diag(entries) / t``."""
    return A + LaurentMatrix.monomial(sp.diag(*[sp.Rational(e) for e in entries]), -1, A.center)
