import json
import random
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from merostat import io
from merostat.singular import strong_regularity_classify
from merostat.singular.oracles import oracle_system


def schema(name):
    text = resources.files("merostat").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@pytest.mark.parametrize("name", ["laurent_input", "laurent_series", "classification_report",
                                  "kernel_poly", "sigma_summary", "poles", "verify"])
def test_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(schema(name))


# floats and exact numbers


@pytest.mark.parametrize("x,text", [(0.0, "0.0"), (-1.0, "-1.0"), (1e20, "1e+20"), (0.1, "0.10000000000000001"),
                                    (float("nan"), '"nan"'), (float("-inf"), '"-inf"')])
def test_fmt_float(x, text):
    assert io.fmt_float(x) == text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    back = json.loads(io.fmt_float(x))
    assert isinstance(back, float) and back == x


def test_exact_strings():
    assert io.exact_str(sp.Rational(-3, 4)) == "-3/4"
    assert io.exact_str(7) == "7"
    assert io.to_plain(Fraction(1, 3)) == "1/3"
    assert sp.sympify(io.exact_str(1 + sp.sqrt(2))) == 1 + sp.sqrt(2)


def test_to_plain_values():
    assert io.to_plain(1 + 2j) == {"im": 2.0, "re": 1.0}
    assert io.to_plain(np.array([1.5, 2.5])) == [1.5, 2.5]
    assert io.to_plain(np.bool_(True)) is True
    with pytest.raises(TypeError):
        io.to_plain(object())


def test_dumps_sorted_and_stable():
    a = io.dumps({"b": 1.0, "a": [1, 2], "c": {"z": None, "y": True}})
    assert a == io.dumps({"c": {"y": True, "z": None}, "a": [1, 2], "b": 1.0})
    assert a.index('"a"') < a.index('"b"') < a.index('"c"')
    assert json.loads(a) == {"a": [1, 2], "b": 1.0, "c": {"y": True, "z": None}}
    assert a.endswith("\n")


# Laurent files


def test_laurent_round_trip():
    A = oracle_system(random.Random(3), 3).A
    d = io.laurent_to_dict(A)
    jsonschema.validate(json.loads(io.dumps(d)), schema("laurent_series"))
    B = io.laurent_from_dict(json.loads(io.dumps(d)))
    assert B.terms() == A.terms() and B.k_max == A.k_max


@pytest.mark.parametrize("data", [
    [],
    {"coefficients": {}},
    {"coefficients": {"-1": [["1", "0"]]}},
    {"coefficients": {"-1": [["1"]], "0": [["1", "0"], ["0", "1"]]}},
    {"coefficients": {"x": [["1"]]}},
    {"coefficients": {"-1": [["one"]]}},
    {"coefficients": {"-1": [["1"]]}, "k_max": "3"},
])
def test_malformed_laurent(data):
    with pytest.raises(io.MalformedInput):
        io.laurent_from_dict(data)


def test_unreadable_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(io.MalformedInput):
        io.read_laurent(p)
    with pytest.raises(io.MalformedInput):
        io.read_laurent(tmp_path / "missing.json")


def test_report_matches_schema():
    A = oracle_system(random.Random(5), 2).A
    rep = io.report_to_dict(strong_regularity_classify(A))
    jsonschema.validate(json.loads(io.dumps(rep)), schema("classification_report"))
    assert rep["verdict"] == "StrongRegular"
    assert rep["witness"]["W"]["series"]["shape"] == [2, 2]


def test_csv_full_precision(tmp_path):
    p = tmp_path / "t.csv"
    io.write_csv(p, ("a", "b"), [(0.1, 2), (1 / 3, 5)])
    lines = p.read_text().splitlines()
    assert lines[0] == "a,b"
    assert float(lines[2].split(",")[0]) == 1 / 3
