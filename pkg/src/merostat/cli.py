"""Command-line front end.

Exit codes: 0 on success, 1 when a verification check fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import sympy as sp

from . import io
from .errors import DegreeTooLarge, GridTooCoarse, InvalidRegion, MerostatError
from .exact.ratfunc import ratfunc_roots_poles
from .fredholm.continuation import analytic_continuation_probe, real_pole_scan
from .fredholm.quadrature import SmoothKernel
from .fredholm.sigma import N_QUAD, sigma_trace_p3, sigma_trace_p5
from .operator_identity import (
    ConvolutionKernelSpec,
    corollary_exact,
    gamma_log_derivative_check,
    h2_splits_delta,
    hamiltonian_from_h2,
    poly_kernel_resolvent,
)
from .singular.classify import strong_regularity_classify
from .spectral import r_condition_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(MerostatError):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    input: str | None = None
    tolerance: float | None = None
    n: int | None = None
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if self.n is not None and self.n < 8:
            raise UsageError("n must be at least 8")


def _outdir(cfg: JobConfig) -> Path | None:
    if cfg.out is None:
        return None
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _emit(cfg: JobConfig, name: str, payload) -> None:
    text = io.dumps(payload)
    d = _outdir(cfg)
    if d is not None:
        (d / name).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_regularity(cfg: JobConfig) -> int:
    A = io.read_laurent(cfg.input)
    rep = strong_regularity_classify(A, cfg.options.get("K"))
    _emit(cfg, "report.json", io.report_to_dict(rep))
    return EXIT_OK


def _ratfunc_json(r) -> dict:
    num, den = r.coefficients()
    return {"numerator": [io.exact_str(c) for c in num], "denominator": [io.exact_str(c) for c in den]}


def _points(bundle) -> list:
    return [io.to_plain(complex(sp.N(z))) for z in bundle.singular_points]


def cmd_kernel_poly(cfg: JobConfig) -> int:
    try:
        coeffs = [sp.Rational(c.strip()) for c in cfg.options["coeffs"].split(",")]
        spec = ConvolutionKernelSpec.polynomial(coeffs)
    except (TypeError, ValueError, sp.SympifyError) as exc:
        raise UsageError(f"bad --coeffs: {exc}") from exc
    b = poly_kernel_resolvent(spec)
    h = hamiltonian_from_h2(b.h2)
    checks = {
        "log_derivative_identity": gamma_log_derivative_check(b),
        "h2_splits_delta": h2_splits_delta(b),
        "r_zeros_poles_at_half_singular_points": corollary_exact(b),
    }
    r = h.r_function() if b.delta.degree() > 0 else None
    payload = {
        "kernel": [io.exact_str(c) for c in spec.coeffs],
        "delta": [io.exact_str(c) for c in reversed(b.delta.all_coeffs())],
        "h2": _ratfunc_json(b.h2),
        "gamma0": _ratfunc_json(b.gamma0),
        "r": None if r is None else _ratfunc_json(r),
        "singular_points": _points(b),
        "checks": checks,
    }
    if r is not None:
        payload["r_condition"] = r_condition_check(_handle(r)).passes
    _emit(cfg, "kernel.json", payload)
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def _handle(r):
    from .spectral import MeromorphicHandle

    ratfunc_roots_poles(r)  # raises on the zero function
    return MeromorphicHandle.from_rational(r)


def cmd_sigma(cfg: JobConfig) -> int:
    o = cfg.options
    n = cfg.n or 200
    nq = o.get("nquad") or N_QUAD
    if o["xmin"] <= 0 or o["xmax"] <= o["xmin"]:
        raise UsageError("need 0 < xmin < xmax")
    t0 = time.perf_counter()
    if o["which"] == "p5":
        tr = sigma_trace_p5(o["xmin"], o["xmax"], n, nq, o["grid"], o["scheme"])
        tol = cfg.tolerance or 1e-6
        name = "sigma-form Painleve V"
    else:
        tr = sigma_trace_p3(o["xmin"], o["xmax"], n, o["alpha"], nq, o["grid"], o["scheme"])
        tol = cfg.tolerance or 1e-5
        name = "sigma-form Painleve III"
    elapsed = time.perf_counter() - t0
    err = tr.max_residual()
    summary = {"identity": name, "max_error": err, "tolerance": tol, "n": n, "n_quad": nq,
               "scheme": tr.scheme, "alpha": tr.alpha, "passed": bool(err < tol)}
    if o.get("timing"):
        summary["runtime"] = elapsed
    d = _outdir(cfg)
    if d is not None:
        io.write_csv(d / "trace.csv", io.TRACE_HEADER, io.trace_rows(tr))
    _emit(cfg, "summary.json", summary)
    return EXIT_OK if err < tol else EXIT_FAIL


def _kernel_from(o) -> SmoothKernel:
    if o["kernel"] == "sine":
        return SmoothKernel.sine(o["gamma"])
    if o["kernel"] == "bessel":
        return SmoothKernel.bessel(o["gamma"], o["alpha"])
    return SmoothKernel.airy(o["gamma"])


def cmd_continue(cfg: JobConfig) -> int:
    o = cfg.options
    try:
        region = tuple(float(v) for v in o["region"].split(","))
    except ValueError as exc:
        raise UsageError(f"bad --region: {exc}") from exc
    if len(region) != 4:
        raise UsageError("--region needs xmin,xmax,ymin,ymax")
    kernel = _kernel_from(o)
    lam = o["lam"]
    f = lambda u: np.exp(1j * lam * np.asarray(u))  # noqa: E731
    n = cfg.n or 60
    m = analytic_continuation_probe(kernel, region, f, f, n, (o["nx"], o["ny"]))
    payload = {
        "kernel": kernel.family, "gamma": kernel.gamma, "lambda": lam, "region": list(region), "n": n,
        "candidates": [_cand(c) for c in m.candidates],
    }
    if o.get("real_scan") and region[0] >= 0:
        payload["real_scan"] = [_cand(c) for c in real_pole_scan(kernel, f, f, region[0], region[1], n)]
    d = _outdir(cfg)
    if d is not None:
        rows = ((z.real, z.imag, s.real, s.imag, dd.real, dd.imag)
                for z, s, dd in zip(m.z.ravel(), m.sigma.ravel(), m.det.ravel()))
        io.write_csv(d / "sigma_map.csv", io.MAP_HEADER, rows)
    _emit(cfg, "poles.json", payload)
    return EXIT_OK


def _cand(c) -> dict:
    return {"location": c.location, "winding": c.winding, "simple": c.simple,
            "fit_r2": c.fit_r2, "residue": c.residue}


def cmd_verify_all(cfg: JobConfig) -> int:
    from .verify import run_all

    nums = cfg.options.get("only")
    results = []
    for r in run_all(nums):
        print(r.line(), file=sys.stderr, flush=True)
        results.append(r)
    payload = [{"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
               for r in results]
    d = _outdir(cfg)
    if d is not None:
        (d / "verify.json").write_text(io.dumps(payload), encoding="utf-8")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "regularity": cmd_regularity,
    "kernel-poly": cmd_kernel_poly,
    "sigma": cmd_sigma,
    "continue": cmd_continue,
    "verify-all": cmd_verify_all,
}


def run(config: JobConfig) -> int:
    try:
        return COMMANDS[config.command](config)
    except (io.MalformedInput, UsageError, GridTooCoarse, InvalidRegion, DegreeTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MerostatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="merostat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("regularity", help="classify a matrix Laurent system at its center")
    r.add_argument("input", help="JSON file with Laurent coefficient data")
    r.add_argument("--K", type=int, default=None, help="order through which W W^-1 = I is checked")
    r.add_argument("--out")

    k = sub.add_parser("kernel-poly", help="exact resolvent data for an even polynomial kernel")
    k.add_argument("--coeffs", required=True, help="ascending coefficients, e.g. 0,0,1 for x^2")
    k.add_argument("--out")

    s = sub.add_parser("sigma", help="sigma trace with its ODE residual")
    s.add_argument("which", choices=["p5", "p3"])
    s.add_argument("--xmin", type=float, required=True)
    s.add_argument("--xmax", type=float, required=True)
    s.add_argument("--n", type=int, default=200, help="number of trace points")
    s.add_argument("--nquad", type=int, default=None, help="quadrature nodes per operator")
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--grid", choices=["uniform", "chebyshev"], default="uniform")
    s.add_argument("--scheme", choices=["fd4", "chebyshev"], default="fd4")
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--timing", action="store_true", help="include the runtime in the summary")
    s.add_argument("--out")

    c = sub.add_parser("continue", help="sigma over a complex rectangle with pole candidates")
    c.add_argument("--kernel", choices=["sine", "bessel", "airy"], default="sine")
    c.add_argument("--gamma", type=float, default=-1.0)
    c.add_argument("--alpha", type=float, default=0.0)
    c.add_argument("--lam", type=float, default=float(np.pi), help="f = g = exp(i lam u)")
    c.add_argument("--region", required=True, help="xmin,xmax,ymin,ymax")
    c.add_argument("--n", type=int, default=60)
    c.add_argument("--nx", type=int, default=21)
    c.add_argument("--ny", type=int, default=21)
    c.add_argument("--real-scan", action="store_true", help="also scan the real determinant")
    c.add_argument("--out")

    v = sub.add_parser("verify-all", help="run the acceptance suite")
    v.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers")
    v.add_argument("--out")
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    d = vars(ns).copy()
    command = d.pop("command")
    out = d.pop("out", None)
    inp = d.pop("input", None)
    tol = d.pop("tol", None)
    n = d.pop("n", None)
    return JobConfig(command, inp, tol, n, out, d)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
