"""Serialization: deterministic JSON reports, Laurent input files, CSV traces.

Floats are written with 17 significant digits and object keys are sorted, so an
identical computation always produces byte-identical JSON.  Exact numbers are
strings: rationals as ``"p/q"``, algebraic numbers in sympy syntax.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy as sp

from .errors import MerostatError
from .exact.algebra import exact
from .singular.laurent import GaugeTransform, LaurentMatrix


class MalformedInput(MerostatError):
    """An input file does not follow its documented format."""


# ---------------------------------------------------------------------------
# deterministic JSON


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0:
        return "0.0"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def exact_str(value) -> str:
    """``"p/q"`` for rationals, sympy syntax for other exact numbers."""
    v = sp.sympify(value)
    if v.is_Rational:
        return str(v.p) if v.q == 1 else f"{v.p}/{v.q}"
    return str(sp.expand(v))


def to_plain(obj):
    """Convert library objects into JSON-ready dicts, lists and scalars."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, Fraction):
        return exact_str(sp.Rational(obj.numerator, obj.denominator))
    if isinstance(obj, sp.MatrixBase):
        return [[exact_str(obj[i, j]) for j in range(obj.cols)] for i in range(obj.rows)]
    if isinstance(obj, sp.Basic):
        return exact_str(obj)
    if isinstance(obj, LaurentMatrix):
        return laurent_to_dict(obj)
    if isinstance(obj, GaugeTransform):
        return {"F": laurent_to_dict(obj.F)}
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_emit(obj[k], indent, level + 1)}"
                 for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _emit(to_plain(obj), indent, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


# ---------------------------------------------------------------------------
# Laurent matrices


def laurent_to_dict(A: LaurentMatrix) -> dict:
    return {
        "center": exact_str(A.center),
        "k_max": A.k_max,
        "shape": list(A.shape),
        "coefficients": {str(k): to_plain(c) for k, c in A.terms().items()},
    }


def laurent_from_dict(data) -> LaurentMatrix:
    """Parse ``{"center", "coefficients": {"k": [[...]]}, "k_max"}`` into a ``LaurentMatrix``."""
    if not isinstance(data, dict) or "coefficients" not in data:
        raise MalformedInput('expected an object with a "coefficients" field')
    raw = data["coefficients"]
    if not isinstance(raw, dict) or not raw:
        raise MalformedInput('"coefficients" must be a nonempty object keyed by order')
    k_max = data.get("k_max")
    if k_max is not None and not isinstance(k_max, int):
        raise MalformedInput('"k_max" must be an integer or null')
    try:
        center = exact(str(data.get("center", "0")))
        terms = {}
        shape = None
        for key, rows in raw.items():
            k = int(key)
            if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
                raise MalformedInput(f"coefficient {key} is not a list of rows")
            m = sp.Matrix([[exact(str(v)) for v in r] for r in rows])
            if m.free_symbols:
                raise MalformedInput(f"coefficient {key} has non-numeric entries")
            if shape is None:
                shape = m.shape
            elif m.shape != shape:
                raise MalformedInput(f"coefficient {key} has shape {m.shape}, expected {shape}")
            terms[k] = m
    except (ValueError, TypeError, sp.SympifyError) as exc:
        raise MalformedInput(f"bad coefficient data: {exc}") from exc
    if shape[0] != shape[1]:
        raise MalformedInput("coefficient matrices must be square")
    return LaurentMatrix.from_dict(terms, k_max, center)


def read_laurent(path) -> LaurentMatrix:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    return laurent_from_dict(data)


# ---------------------------------------------------------------------------
# reports


def _solution_to_dict(sol) -> dict:
    return {"m": sol.m, "side": sol.side, "description": sol.free_params,
            "series": laurent_to_dict(sol.series)}


def report_to_dict(report) -> dict:
    """Plain form of a ``ClassificationReport``."""
    witness = None
    if report.witness is not None:
        W, Winv = report.witness
        witness = {"W": _solution_to_dict(W), "W_inv": _solution_to_dict(Winv)}
    return {
        "verdict": report.verdict.value,
        "reason": report.reason.value,
        "K": report.K,
        "residue_spectrum": [{"value": to_plain(ev), "multiplicity": int(m)}
                             for ev, m in report.residue_spectrum],
        "solution_dimension": report.solution_dimension,
        "gauge": None if report.gauge is None else to_plain(report.gauge),
        "detail": report.detail,
        "extra": to_plain(report.extra),
        "witness": witness,
    }


# ---------------------------------------------------------------------------
# CSV


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format(float(v), ".17g") if isinstance(v, (float, np.floating)) else v
                        for v in row])


def trace_rows(trace):
    """Rows ``x, Re sigma, Im sigma, sigma', sigma'', residual`` of a ``SigmaTrace``."""
    s = np.asarray(trace.sigma, dtype=complex)
    res = trace.residual if trace.residual is not None else np.full(len(s), np.nan)
    for i in range(len(s)):
        yield (float(trace.x[i]), float(s[i].real), float(s[i].imag),
               float(np.real(trace.d1[i])), float(np.real(trace.d2[i])), float(res[i]))


TRACE_HEADER = ("x", "re_sigma", "im_sigma", "d_sigma", "d2_sigma", "residual")
DET_HEADER = ("x", "re_D", "im_D")
MAP_HEADER = ("re_z", "im_z", "re_sigma", "im_sigma", "re_D", "im_D")
