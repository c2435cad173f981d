"""The acceptance suite: one check per criterion, each returning a ``CriterionResult``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .exact.ratfunc import RationalFunction, residues
from .fredholm.continuation import analytic_continuation_probe, real_pole_scan
from .fredholm.quadrature import SmoothKernel
from .fredholm.sigma import (
    central_fd4,
    parity_split,
    q_r_functions,
    sigma_p3,
    sigma_p5_log_derivative,
    sigma_p5_routes,
    sigma_trace_p3,
    sigma_trace_p5,
    bessel_norm_bound,
)
from .operator_identity import (
    XI,
    ConvolutionKernelSpec,
    exp_kernel_h2,
    gamma_log_derivative_check,
    h2_nystrom,
    h2_splits_delta,
    poly_kernel_resolvent,
)
from .singular.classify import Reason, Verdict, strong_regularity_classify
from .singular.oracles import diagonal_perturbation, oracle_suite, shifted_residue
from .spectral import MeromorphicHandle, r_condition_check, tangent_handle, theorem_consistency


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d}: {self.title} -- {self.detail}"


def _x2_bundle():
    return poly_kernel_resolvent(ConvolutionKernelSpec.polynomial([0, 0, 1]))


# ---------------------------------------------------------------------------
# exact operator-identity criteria


def criterion_1() -> CriterionResult:
    t0 = time.perf_counter()
    b = _x2_bundle()
    elapsed = time.perf_counter() - t0
    want = sp.Poly(XI**9 / 1080 - XI**6 / 30 + 1, XI, domain="QQ")
    exact_ok = b.delta == want
    ok = exact_ok and elapsed < 1.0
    return CriterionResult(1, "Delta for k=x^2", ok,
                           f"exact={exact_ok}, runtime {elapsed:.3f}s (< 1s)",
                           {"runtime": elapsed})


def criterion_2() -> CriterionResult:
    b = _x2_bundle()
    want = RationalFunction.from_expr((XI**3 / 6 - 1) / (XI**6 / 180 - XI**3 / 6 - 1), XI)
    eq = b.h2 == want
    split = h2_splits_delta(b)
    return CriterionResult(2, "h2 for k=x^2", eq and split, f"exact h2={eq}, Delta splits={split}")


def criterion_3() -> CriterionResult:
    b = _x2_bundle()
    found = [complex(sp.N(z, 30)) for z in b.singular_points]
    cubes = [6, 15 + 9 * np.sqrt(5), 15 - 9 * np.sqrt(5)]
    want = [np.cbrt(c) * np.exp(2j * np.pi * k / 3) for c in cubes for k in range(3)]
    unmatched = list(want)
    worst = 0.0
    for z in found:
        j = int(np.argmin([abs(z - w) for w in unmatched]))
        worst = max(worst, abs(z - unmatched.pop(j)))
    ok = len(found) == 9 and not unmatched and worst < 1e-10
    return CriterionResult(3, "roots of Delta", ok, f"{len(found)} roots, max error {worst:.2e} (< 1e-10)",
                           {"max_error": worst})


def criterion_4() -> CriterionResult:
    b = _x2_bundle()
    res = residues(b.gamma0)
    got = {}
    for fr in res:
        got[sp.expand(fr.factor.monic().as_expr())] = fr.constant
    f6 = sp.expand(XI**3 - 6)
    f9 = sp.expand(XI**6 - 30 * XI**3 - 180)
    ok = got.get(f6) == 1 and got.get(f9) == -1 and len(got) == 2
    return CriterionResult(4, "residues of Gamma_0", ok,
                           f"x^3-6 -> {got.get(f6)}, x^6-30x^3-180 -> {got.get(f9)}")


def criterion_5() -> CriterionResult:
    kernels = {"0": [0], "3/2": ["3/2"], "x^2": [0, 0, 1], "x^4": [0, 0, 0, 0, 1]}
    out = {name: gamma_log_derivative_check(poly_kernel_resolvent(ConvolutionKernelSpec.polynomial(c)))
           for name, c in kernels.items()}
    return CriterionResult(5, "log-derivative identity", all(out.values()),
                           ", ".join(f"{k}:{v}" for k, v in out.items()))


def criterion_6() -> CriterionResult:
    errs = []
    for beta, lam, xi in [(1.0, np.pi, 0.7), (2.0, 1.0, 1.3)]:
        closed = exp_kernel_h2(beta, lam).h2(xi)
        nys = h2_nystrom(ConvolutionKernelSpec.exponential(beta, lam), xi)
        errs.append(abs(closed - nys))
    worst = max(errs)
    return CriterionResult(6, "exponential kernel h2", worst < 1e-8, f"max |closed - Nystrom| {worst:.2e} (< 1e-8)",
                           {"max_error": worst})


# ---------------------------------------------------------------------------
# sine-kernel criteria


def criterion_7() -> CriterionResult:
    t0 = time.perf_counter()
    tr = sigma_trace_p5(0.5, 6.0, 200)
    elapsed = time.perf_counter() - t0
    tr2 = sigma_trace_p5(0.5, 6.0, 400)
    r1, r2 = tr.max_residual(), tr2.max_residual()
    ok = r1 < 1e-6 and r1 / r2 >= 10 and elapsed < 60
    return CriterionResult(7, "Painleve V trace", ok,
                           f"residual {r1:.2e} (< 1e-6), doubled {r2:.2e} (ratio {r1 / r2:.1f} >= 10), "
                           f"runtime {elapsed:.2f}s (< 60s)",
                           {"residual": r1, "residual_doubled": r2, "runtime": elapsed})


def criterion_8() -> CriterionResult:
    d12 = d3 = 0.0
    for x in (1.0, 2.0, 4.0):
        r = sigma_p5_routes(x)
        d12 = max(d12, abs(r.bilinear - r.log_derivative))
        d3 = max(d3, abs(r.resolvent - r.bilinear), abs(r.resolvent - r.log_derivative))
    ok = d12 < 1e-7 and d3 < 1e-7
    return CriterionResult(8, "dual-route sigma", ok,
                           f"bilinear vs log-det {d12:.2e}, resolvent vs both {d3:.2e} (< 1e-7)",
                           {"bilinear_logdet": d12, "resolvent": d3})


def _tR(t):
    return t * q_r_functions(t)[2]


def criterion_9() -> CriterionResult:
    e21 = e22 = 0.0
    for t in (0.25, 0.5, 1.0):
        q2, _, _ = q_r_functions(2 * t)
        _, r, _ = q_r_functions(t)
        e21 = max(e21, abs(q2 - r * np.exp(1j * np.pi * t)))
        dtR = central_fd4(_tR, t, 1e-3)
        e22 = max(e22, abs(dtR - abs(r) ** 2))
    ok = e21 < 1e-8 and e22 < 1e-6
    return CriterionResult(9, "q/r identities", ok,
                           f"q(2t)=r(t)e^(i pi t) error {e21:.2e} (< 1e-8), (tR)'=|r|^2 error {e22:.2e} (< 1e-6)",
                           {"q_r": e21, "tR": e22})


def criterion_10() -> CriterionResult:
    ep = er = 0.0
    for t in (0.25, 0.5, 1.0):
        p = parity_split(-1.0, t)
        ep = max(ep, p.product_error)
        er = max(er, abs(p.ratio - p.h2_direct), abs(p.ratio - p.h2_symmetric))
    ok = ep < 1e-10 and er < 1e-8
    return CriterionResult(10, "parity determinants", ok,
                           f"product {ep:.2e} (< 1e-10 rel), ratio vs h2 {er:.2e} (< 1e-8)",
                           {"product": ep, "ratio": er})


# ---------------------------------------------------------------------------
# Bessel kernel


def _sR(alpha):
    return lambda s: sigma_p3(s, alpha).sigma_diag


def criterion_11() -> CriterionResult:
    norms_ok = True
    worst_margin = np.inf
    for gamma in (0.5, 1.0):
        for alpha in (0.0, 1.0):
            for xi in (1.0, 3.0):
                nrm, _ = bessel_norm_bound(gamma, alpha, xi)
                norms_ok &= nrm < gamma
                worst_margin = min(worst_margin, gamma - nrm)
    res = {}
    for alpha in (0.0, 1.0):
        res[alpha] = sigma_trace_p3(0.5, 5.0, 200, alpha).max_residual()
    ident = 0.0
    for alpha in (0.0, 1.0):
        for s in (1.0, 2.0, 4.0):
            p = sigma_p3(s, alpha)
            d = central_fd4(_sR(alpha), s, 1e-3)
            ident = max(ident, abs(d - p.q**2 / 4), abs(p.R - p.R_logdet), abs(p.sigma - p.sigma_diag))
    ok = norms_ok and max(res.values()) < 1e-5 and ident < 1e-6
    return CriterionResult(11, "Bessel kernel", ok,
                           f"norm margin {worst_margin:.3f} (> 0), P3 residual "
                           f"{res[0.0]:.2e}/{res[1.0]:.2e} (< 1e-5), identities {ident:.2e} (< 1e-6)",
                           {"norm_margin": worst_margin, "residual_a0": res[0.0], "residual_a1": res[1.0],
                            "identities": ident})


# ---------------------------------------------------------------------------
# classifier criteria


def _product_is_identity(report) -> bool:
    W, Winv = report.witness
    P = W.series @ Winv.series
    K = report.K
    for k in range(P.low, K + 1):
        want = sp.eye(P.n) if k == 0 else sp.zeros(P.n, P.n)
        if sp.Matrix(P.coeff(k)) != want:
            return False
    return True


def criterion_12(count: int = 50, seed: int = 0) -> CriterionResult:
    suite = oracle_suite(count, seed)
    accepted = 0
    rejected = 0
    perturbations = 0
    for i, s in enumerate(suite):
        rep = strong_regularity_classify(s.A)
        if rep.verdict is Verdict.STRONG_REGULAR and _product_is_identity(rep):
            accepted += 1
        non_int = [sp.Rational(1, 2), sp.Rational(1, 3) + i % 3]
        perts = [shifted_residue(s.A, non_int[0]),
                 diagonal_perturbation(s.A, [non_int[1]] + [0] * (s.A.n - 1))]
        for B in perts:
            r = strong_regularity_classify(B)
            perturbations += 1
            if r.reason is Reason.NON_INTEGER_EIGENVALUE:
                rejected += 1
    ok = accepted == count and rejected == perturbations
    return CriterionResult(12, "classifier oracle suite", ok,
                           f"{accepted}/{count} StrongRegular with W W^-1 = I, "
                           f"{rejected}/{perturbations} perturbations rejected")


def _r3_r4_family(rng: random.Random, count: int = 20):
    x = sp.Symbol("x")
    out = []

    def draw(used):
        while True:
            v = sp.Rational(rng.randint(-9, 9), rng.randint(1, 4))
            if v not in used:
                return v

    for _ in range(count):
        l1 = draw(set())
        l2 = draw({l1})
        out.append((f"r3({l1},{l2})", (x - l1) / (x - l2)))
        l1 = draw(set())
        l2 = draw({l1})
        mu = draw({l1, l2})
        out.append((f"r4({l1},{l2},{mu})", (x - l1) * (x - l2) / (x - mu)))
    return out


def criterion_13(seed: int = 0) -> CriterionResult:
    x = sp.Symbol("x")
    bad = []
    consistent = True
    passing = [("x", MeromorphicHandle.from_rational(x)), ("tan", tangent_handle())]
    for name, h in passing:
        if not r_condition_check(h).passes:
            bad.append(name)
        consistent &= all(c.consistent for c in theorem_consistency(h))
    failing = [(f"x^{d}", x**d) for d in range(2, 7)] + _r3_r4_family(random.Random(seed))
    for name, e in failing:
        h = MeromorphicHandle.from_rational(e)
        if r_condition_check(h).passes:
            bad.append(name)
        consistent &= all(c.consistent for c in theorem_consistency(h))
    ok = not bad and consistent
    return CriterionResult(13, "r-condition examples", ok,
                           f"{len(passing) + len(failing)} functions, wrong verdicts {bad or 'none'}, "
                           f"iff-consistency {consistent}")


# ---------------------------------------------------------------------------
# continuation


def _e_pi(u):
    return np.exp(1j * np.pi * np.asarray(u))


def criterion_14() -> CriterionResult:
    kernel = SmoothKernel.sine(-1.0)
    m = analytic_continuation_probe(kernel, (0.5, 2.5, -0.5, 0.5), _e_pi, _e_pi)
    ny = m.z.shape[0]
    mid = ny // 2
    real = m.z[mid].real
    # the independent real-axis route: (S^{-1} e, e) = -sigma = -xi D'(xi) / D(xi)
    ref = np.array([-sigma_p5_log_derivative(np.pi * v).real for v in real])
    seg = float(np.max(np.abs(m.sigma[mid] - ref)))
    sym = float(np.nanmax(np.abs(m.sigma[::-1] - np.conj(m.sigma))))
    cands = real_pole_scan(SmoothKernel.sine(-1.5), _e_pi, _e_pi, 0.0, 3.0)
    simple = all(c.simple for c in cands)
    ok = seg < 1e-8 and sym < 1e-8 and simple
    return CriterionResult(14, "analytic continuation", ok,
                           f"real segment {seg:.2e}, Schwarz {sym:.2e} (< 1e-8), "
                           f"gamma=-1.5 real zeros {len(cands)}, all simple={simple}",
                           {"segment": seg, "schwarz": sym, "poles": [c.location.real for c in cands]})


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12, 13: criterion_13, 14: criterion_14,
}


def run_all(numbers=None) -> list[CriterionResult]:
    return [CRITERIA[k]() for k in (numbers or sorted(CRITERIA))]
