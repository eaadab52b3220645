"""Deterministic JSON for polynomials, operators, sequences, measures and reports.

Rationals are written as strings ("3/4") or integers, floats with 17
significant digits, keys in insertion order. The loaders raise
:class:`FormatError` carrying a JSON path such as ``$.terms[2].num``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .cgroup import ConstSeries
from .momseq import AtomicMeasure, SequenceND, Sequence1D, _make
from .opcore import OperatorSeries
from .polyalg import Polynomial, grlex_key, multi_indices


class FormatError(ValueError):
    """Malformed input document; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- encoding --------------------------------------------------------------------

def scalar(c):
    """Fraction -> int or "p/q"; float stays float (formatted at emission)."""
    if isinstance(c, bool):
        return c
    if isinstance(c, (int, np.integer)):
        return int(c)
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, (float, np.floating)):
        return float(c)
    try:
        import mpmath

        if isinstance(c, mpmath.mpf):
            return float(c)
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"not a scalar: {c!r}")


def poly_to_json(p: Polynomial) -> dict:
    terms = []
    for alpha, c in p.sorted_terms():
        f = Fraction(c)
        t = {"alpha": list(alpha), "num": str(f.numerator), "den": str(f.denominator)}
        if isinstance(c, float):
            t["value"] = c
        terms.append(t)
    return {"n": p.n, "terms": terms}


def operator_to_json(T: OperatorSeries) -> dict:
    items = sorted(T.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
    return {"n": T.n, "order": T.order, "coeffs": [{"alpha": list(a), "poly": poly_to_json(q)} for a, q in items]}


def const_to_json(A: ConstSeries) -> dict:
    items = sorted(A.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
    return {
        "n": A.n,
        "order": A.order,
        "coeffs": [{"alpha": list(a), "poly": poly_to_json(Polynomial.const(c, A.n))} for a, c in items],
    }


def sequence_to_json(s: SequenceND) -> dict:
    return {"n": s.n, "N": s.N, "values": [{"alpha": list(a), "value": scalar(s.values[a])} for a in multi_indices(s.n, s.N)]}


def measure_to_json(mu: AtomicMeasure) -> dict:
    return {"atoms": [{"point": [scalar(v) for v in p], "weight": scalar(w)} for p, w in mu.atoms]}


def to_jsonable(obj: Any):
    """Recursively convert package objects to plain JSON values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Polynomial):
        return poly_to_json(obj)
    if isinstance(obj, OperatorSeries):
        return operator_to_json(obj)
    if isinstance(obj, ConstSeries):
        return const_to_json(obj)
    if isinstance(obj, SequenceND):
        return sequence_to_json(obj)
    if isinstance(obj, AtomicMeasure):
        return measure_to_json(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    try:
        return scalar(obj)
    except TypeError:
        pass
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = f"{x:.17g}"
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(v, indent: int, level: int, out: list):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, x) in enumerate(v.items()):
            out.append(pad + json.dumps(k) + ": ")
            _emit(x, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(v) else "\n")
        out.append(end + "}")
    elif isinstance(v, list):
        if not v:
            out.append("[]")
            return
        if all(not isinstance(x, (dict, list)) for x in v):
            out.append("[")
            for i, x in enumerate(v):
                _emit(x, indent, level + 1, out)
                if i + 1 < len(v):
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, x in enumerate(v):
            out.append(pad)
            _emit(x, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(v) else "\n")
        out.append(end + "]")
    elif isinstance(v, bool) or v is None:
        out.append(json.dumps(v))
    elif isinstance(v, float):
        out.append(format_float(v))
    else:
        out.append(json.dumps(v))


def dumps(obj: Any, indent: int = 2) -> str:
    out: list = []
    _emit(to_jsonable(obj), indent, 0, out)
    return "".join(out) + "\n"


# -- decoding --------------------------------------------------------------------

def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{source}:{e.lineno}:{e.colno}", e.msg) from None


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(path, e.strerror or str(e)) from None
    return loads(text, path)


def parse_scalar(v, path: str = "$"):
    if isinstance(v, bool):
        raise FormatError(path, "expected a number")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise FormatError(path, f"not a rational: {v!r}") from None
    raise FormatError(path, "expected a number or rational string")


def _get(obj, key, path):
    if not isinstance(obj, dict):
        raise FormatError(path, "expected an object")
    if key not in obj:
        raise FormatError(path, f"missing field {key!r}")
    return obj[key]


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(path, "expected an integer")
    return v


def _alpha(v, n, path):
    if not isinstance(v, list) or len(v) != n:
        raise FormatError(path, f"expected a multi-index of length {n}")
    out = tuple(_int(a, f"{path}[{i}]") for i, a in enumerate(v))
    if any(a < 0 for a in out):
        raise FormatError(path, "negative exponent")
    return out


def parse_polynomial(obj, path: str = "$") -> Polynomial:
    """Polynomial document; a bare list is read as ascending univariate coefficients."""
    if isinstance(obj, list):
        return Polynomial.from_coeffs([parse_scalar(c, f"{path}[{i}]") for i, c in enumerate(obj)])
    n = _int(_get(obj, "n", path), f"{path}.n")
    terms = _get(obj, "terms", path)
    if not isinstance(terms, list):
        raise FormatError(f"{path}.terms", "expected a list")
    out = {}
    for i, t in enumerate(terms):
        tp = f"{path}.terms[{i}]"
        alpha = _alpha(_get(t, "alpha", tp), n, f"{tp}.alpha")
        if "value" in t:
            c = parse_scalar(t["value"], f"{tp}.value")
        else:
            num = _get(t, "num", tp)
            den = t.get("den", "1")
            try:
                c = Fraction(int(num), int(den))
            except (ValueError, TypeError, ZeroDivisionError):
                raise FormatError(tp, f"bad rational {num!r}/{den!r}") from None
        if alpha in out:
            raise FormatError(tp, f"duplicate multi-index {list(alpha)}")
        out[alpha] = c
    return Polynomial(n, out)


def parse_operator(obj, path: str = "$") -> OperatorSeries:
    n = _int(_get(obj, "n", path), f"{path}.n")
    order = _int(_get(obj, "order", path), f"{path}.order")
    coeffs = {}
    for i, t in enumerate(_get(obj, "coeffs", path)):
        tp = f"{path}.coeffs[{i}]"
        alpha = _alpha(_get(t, "alpha", tp), n, f"{tp}.alpha")
        if sum(alpha) > order:
            raise FormatError(f"{tp}.alpha", f"order {sum(alpha)} exceeds {order}")
        q = parse_polynomial(_get(t, "poly", tp), f"{tp}.poly")
        if q.n != n:
            raise FormatError(f"{tp}.poly", "dimension mismatch")
        coeffs[alpha] = q
    return OperatorSeries(n, order, coeffs)


def parse_const(obj, path: str = "$") -> ConstSeries:
    T = parse_operator(obj, path)
    coeffs = {}
    for alpha, q in T.coeffs.items():
        if q.deg > 0:
            raise FormatError(path, f"coefficient at {list(alpha)} is not constant")
        coeffs[alpha] = q.constant_term()
    return ConstSeries.make(T.n, T.order, coeffs)


def parse_sequence(obj, path: str = "$") -> SequenceND:
    """Sequence document; a bare list is read as s_0, ..., s_N."""
    if isinstance(obj, list):
        return Sequence1D([parse_scalar(c, f"{path}[{i}]") for i, c in enumerate(obj)])
    n = _int(_get(obj, "n", path), f"{path}.n")
    N = _int(_get(obj, "N", path), f"{path}.N")
    vals = {}
    for i, t in enumerate(_get(obj, "values", path)):
        tp = f"{path}.values[{i}]"
        vals[_alpha(_get(t, "alpha", tp), n, f"{tp}.alpha")] = parse_scalar(_get(t, "value", tp), f"{tp}.value")
    missing = [a for a in multi_indices(n, N) if a not in vals]
    if missing:
        raise FormatError(f"{path}.values", f"missing alpha {list(missing[0])}")
    return _make(n, N, vals)


def parse_measure(obj, path: str = "$") -> AtomicMeasure:
    atoms = []
    for i, t in enumerate(_get(obj, "atoms", path)):
        tp = f"{path}.atoms[{i}]"
        pt = _get(t, "point", tp)
        if not isinstance(pt, list):
            pt = [pt]
        point = [parse_scalar(v, f"{tp}.point[{j}]") for j, v in enumerate(pt)]
        atoms.append((point, parse_scalar(_get(t, "weight", tp), f"{tp}.weight")))
    try:
        return AtomicMeasure(atoms)
    except ValueError as e:
        raise FormatError(path, str(e)) from None


__all__ = [
    "FormatError",
    "scalar",
    "poly_to_json",
    "operator_to_json",
    "const_to_json",
    "sequence_to_json",
    "measure_to_json",
    "to_jsonable",
    "format_float",
    "dumps",
    "loads",
    "load_file",
    "parse_scalar",
    "parse_polynomial",
    "parse_operator",
    "parse_const",
    "parse_sequence",
    "parse_measure",
]
