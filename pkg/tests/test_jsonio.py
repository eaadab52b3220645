import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polypreserve import jsonio
from polypreserve.cgroup import ConstSeries
from polypreserve.jsonio import FormatError
from polypreserve.momseq import AtomicMeasure, Sequence1D
from polypreserve.opcore import OperatorSeries
from polypreserve.polyalg import Polynomial

from conftest import polynomials

x, y = Polynomial.var(0, 2), Polynomial.var(1, 2)


def test_polynomial_roundtrip_exact():
    p = (x - y.scale(F(3, 4))) ** 3 + F(1, 7)
    doc = json.loads(jsonio.dumps(p))
    assert doc["terms"][0]["alpha"] == [0, 0]
    assert jsonio.parse_polynomial(doc) == p


def test_float_coefficients_keep_value_field():
    p = Polynomial.from_coeffs([0.1, 2.0])
    doc = json.loads(jsonio.dumps(p))
    assert doc["terms"][0]["value"] == 0.1
    q = jsonio.parse_polynomial(doc)
    assert q.coeff((0,)) == 0.1 and isinstance(q.coeff((0,)), float)


def test_bare_list_forms():
    assert jsonio.parse_polynomial([1, "1/2", 0, -3]) == Polynomial.from_coeffs([1, F(1, 2), 0, -3])
    s = jsonio.parse_sequence([1, 0, "1/3"])
    assert s.as_list() == [1, 0, F(1, 3)]


def test_operator_and_const_roundtrip():
    one = Polynomial.var(0)
    T = OperatorSeries(1, 3, {(0,): one, (2,): Polynomial.const(F(-1, 2))})
    assert jsonio.parse_operator(json.loads(jsonio.dumps(T))) == T
    C = ConstSeries.make(2, 2, {(0, 0): 1, (1, 1): F(2, 3)})
    assert jsonio.parse_const(json.loads(jsonio.dumps(C))) == C


def test_sequence_and_measure_roundtrip():
    s = Sequence1D([F(1), F(1, 2), F(1, 3)])
    assert jsonio.parse_sequence(json.loads(jsonio.dumps(s))).as_list() == s.as_list()
    mu = AtomicMeasure([([F(1, 2)], F(1, 3)), ([-2], 1)])
    back = jsonio.parse_measure(json.loads(jsonio.dumps(mu)))
    assert back.atoms == mu.atoms


def test_float_formatting():
    assert jsonio.format_float(0.1) == "0.10000000000000001"
    assert jsonio.format_float(2.0) == "2.0"
    assert jsonio.format_float(float("nan")) == "NaN"
    assert jsonio.format_float(float("-inf")) == "-Infinity"
    assert jsonio.dumps({"a": [1, 2.5], "b": {}}) == '{\n  "a": [1, 2.5],\n  "b": {}\n}\n'


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"terms": []}, "$"),
        ({"n": 1, "terms": [{"alpha": [1, 2], "num": "1"}]}, "$.terms[0].alpha"),
        ({"n": 1, "terms": [{"alpha": [-1], "num": "1"}]}, "$.terms[0].alpha"),
        ({"n": 1, "terms": [{"alpha": [0], "num": "x"}]}, "$.terms[0]"),
        ({"n": 1, "terms": [{"alpha": [0], "num": "1"}, {"alpha": [0], "num": "2"}]}, "$.terms[1]"),
        ({"n": 1, "terms": [{"alpha": [0], "value": True}]}, "$.terms[0].value"),
        ({"n": "1", "terms": []}, "$.n"),
    ],
)
def test_polynomial_errors_carry_paths(doc, path):
    with pytest.raises(FormatError) as e:
        jsonio.parse_polynomial(doc)
    assert e.value.path == path


def test_operator_and_sequence_errors():
    with pytest.raises(FormatError) as e:
        jsonio.parse_operator({"n": 1, "order": 1, "coeffs": [{"alpha": [2], "poly": [1]}]})
    assert e.value.path == "$.coeffs[0].alpha"
    with pytest.raises(FormatError) as e:
        jsonio.parse_const({"n": 1, "order": 1, "coeffs": [{"alpha": [1], "poly": [0, 1]}]})
    assert "not constant" in str(e.value)
    with pytest.raises(FormatError) as e:
        jsonio.parse_sequence({"n": 1, "N": 2, "values": [{"alpha": [0], "value": 1}]})
    assert e.value.path == "$.values"
    with pytest.raises(FormatError):
        jsonio.parse_scalar("1/0")


def test_syntax_errors_report_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "n": 1,\n  "terms": [,]\n}')
    with pytest.raises(FormatError) as e:
        jsonio.load_file(str(bad))
    assert e.value.path == f"{bad}:3:13"
    with pytest.raises(FormatError):
        jsonio.load_file(str(tmp_path / "missing.json"))


@given(polynomials(2, 4))
def test_polynomial_roundtrip_property(p):
    text = jsonio.dumps(p)
    q = jsonio.parse_polynomial(json.loads(text))
    assert q == p and jsonio.dumps(q) == text
