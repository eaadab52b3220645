import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polynomials, rationals
from polypreserve.cgroup import ConstSeries
from polypreserve.opcore import (
    NotDiagonal,
    OperatorSeries,
    apply,
    compose,
    diagonal_operator,
    diagonal_relations,
    extract_canonical,
    freeze,
    is_degree_preserving,
    moment_data,
    multiplication,
    point_evaluation,
    to_diagonal,
)
from polypreserve.polyalg import Polynomial, TruncationError, multi_indices

x = Polynomial.var(0)
d = OperatorSeries(1, 3, {(1,): Polynomial.const(1)})


def test_apply_examples():
    p = x**3 - x + 2
    assert apply(OperatorSeries.identity(1, 3), p) == p
    assert apply(d, x**3) == 3 * x * x
    ev0 = OperatorSeries(1, 4, {(k,): (-x) ** k / math.factorial(k) for k in range(5)})
    assert apply(ev0, x * x) == 0
    assert apply(ev0, x**4 + 7) == 7


def test_apply_truncation_error():
    with pytest.raises(TruncationError):
        apply(d, x**4)
    assert apply(d, x**4, finite=True) == 4 * x**3


def test_extract_examples():
    T = extract_canonical(lambda p: p, 1, 3)
    assert T == OperatorSeries.identity(1, 3)
    E = extract_canonical(lambda p: Polynomial.const(p.eval(0)), 1, 4)
    for k in range(5):
        assert E[k] == (-x) ** k / math.factorial(k)
    M = extract_canonical(lambda p: x * p, 1, 2)
    assert M.coeffs == {(0,): x}


def test_degree_preserving_examples():
    assert is_degree_preserving(OperatorSeries.identity(1, 2))
    assert not is_degree_preserving(OperatorSeries(1, 1, {(1,): x * x}))
    t = {(k,): F(1, k + 1) for k in range(5)}
    assert is_degree_preserving(diagonal_operator(t, 1, 4))


def test_to_diagonal_examples():
    D = to_diagonal(OperatorSeries.identity(1, 3))
    assert all(v == 1 for v in D.t.values())
    assert all(D.c.get((k,), 0) == (k == 0) for k in range(4))
    E = to_diagonal(point_evaluation(0, 3))
    assert all(E.t[(k,)] == (k == 0) for k in range(4))
    assert all(E.c[(k,)] == (-1) ** k for k in range(4))
    y = F(3, 2)
    S = to_diagonal(extract_canonical(lambda p: p.compose_affine(y, 0), 1, 3))
    assert all(S.t[(k,)] == y**k for k in range(4))
    nd = to_diagonal(d)
    assert isinstance(nd, NotDiagonal) and not nd


def test_diagonal_relation_examples():
    delta = {(k,): F(k == 0) for k in range(5)}
    assert all(v == 1 for v in diagonal_relations(delta, "c").values())
    assert diagonal_relations(delta, "t") == {(k,): F((-1) ** k) for k in range(5)}
    zero = {(k,): F(0) for k in range(5)}
    assert all(v == 0 for v in diagonal_relations(zero, "t").values())


def test_freeze_examples():
    T = OperatorSeries(1, 1, {(1,): x})
    assert freeze(T, 2) == ConstSeries.partial(1, 1, 0, 1, 2)
    T = OperatorSeries(1, 2, {(0,): x * x + 1, (2,): x})
    assert freeze(T, 3)[0] == 10
    # moments of delta_1 as coefficients of x^k/k! d^k
    T = OperatorSeries(1, 3, {(k,): x**k / math.factorial(k) for k in range(4)})
    y = F(5, 2)
    assert all(freeze(T, y)[k] == y**k / math.factorial(k) for k in range(4))


def test_moment_data_is_factorial_scaled():
    T = OperatorSeries(1, 3, {(k,): x ** (k % 2) for k in range(4)})
    s = moment_data(T, 2)
    assert s == {(0,): 1, (1,): 2, (2,): 2, (3,): 12}


def test_multiplication_and_compose():
    M = multiplication(x + 1, 3)
    assert M(x * x) == x**3 + x * x
    xd = OperatorSeries(1, 3, {(1,): x})
    C = compose(d, xd)
    assert C(x**3) == 9 * x * x
    assert C == OperatorSeries(1, 3, {(1,): Polynomial.const(1), (2,): x})


@st.composite
def operators(draw, n=1, order=3):
    coeffs = {}
    for a in multi_indices(n, order):
        if draw(st.booleans()):
            coeffs[a] = draw(polynomials(n=n, max_deg=2))
    return OperatorSeries(n, order, coeffs)


@given(operators(n=1, order=4))
def test_extract_inverts_apply(T):
    assert extract_canonical(lambda p: apply(T, p), 1, 4) == T


@given(operators(n=2, order=2))
def test_extract_inverts_apply_2d(T):
    assert extract_canonical(lambda p: apply(T, p), 2, 2) == T


@given(operators(n=1, order=3), polynomials(max_deg=3), rationals)
def test_freeze_agrees_pointwise(T, f, y):
    assert apply(T, f).eval(y) == freeze(T, y).apply(f).eval(y)


@given(st.lists(rationals, min_size=6, max_size=6))
def test_diagonal_relations_are_inverse(vals):
    seq = {(k,): v for k, v in enumerate(vals)}
    assert diagonal_relations(diagonal_relations(seq, "t"), "c") == seq
    assert diagonal_relations(diagonal_relations(seq, "c"), "t") == seq


@given(st.lists(rationals, min_size=5, max_size=5), polynomials(max_deg=4))
def test_degree_preserving_keeps_degree(vals, p):
    T = diagonal_operator({(k,): v for k, v in enumerate(vals)}, 1, 4)
    assert is_degree_preserving(T)
    assert apply(T, p).deg <= p.deg
