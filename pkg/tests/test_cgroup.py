import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import algebra_elements, group_elements
from polypreserve.cgroup import (
    CAlgebraElement,
    CGroupElement,
    ConstSeries,
    exp,
    exp_series,
    from_sequence,
    inv,
    log,
    log_series,
    mul,
    translation,
)
from polypreserve.momseq import AtomicMeasure, Sequence1D, atomic_moments, convolve
from polypreserve.polyalg import DimensionError, Polynomial


def d1(coeffs, order=3):
    return ConstSeries.make(1, order, {(k,): c for k, c in enumerate(coeffs)})


def test_cubic_product_and_inverse_formulas():
    rng = random.Random(3)
    for _ in range(20):
        a = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        b = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        A, B = d1([1] + a), d1([1] + b)
        P = mul(A, B)
        assert P[1] == a[0] + b[0]
        assert P[2] == a[1] + a[0] * b[0] + b[1]
        assert P[3] == a[2] + a[1] * b[0] + a[0] * b[1] + b[2]
        I = inv(A)
        assert I[1] == -a[0]
        assert I[2] == -a[1] + a[0] ** 2
        assert I[3] == -a[2] + 2 * a[1] * a[0] - a[0] ** 3


def test_identity_laws():
    one = ConstSeries.identity(1, 3)
    A = d1([1, 2, F(1, 3), -1])
    assert mul(A, one) == A
    assert mul(A, inv(A)) == one
    assert inv(one) == one
    assert exp(ConstSeries.zero(1, 3)) == one
    assert log(one) == ConstSeries.zero(1, 3)


def test_exp_and_log_examples():
    assert exp(d1([0, 2, -1, 1])) == d1([1, 2, 1, F(1, 3)])
    assert log(d1([1, -1, 1, 1])) == d1([0, -1, F(1, 2), F(5, 3)])
    t = F(2, 7)
    assert exp(ConstSeries.partial(1, 6, 0, 1, t)) == translation(t, 6)
    assert translation(t, 6)[4] == t**4 / 24


def test_from_sequence_examples():
    assert from_sequence([1, 0, 0, 0], 3) == ConstSeries.identity(1, 3)
    t = F(3, 4)
    assert from_sequence([t**k for k in range(6)], 5) == translation(t, 5)
    lam = F(4)
    mu = AtomicMeasure([(-2, F(1, 2)), (2, F(1, 2))])
    D = from_sequence(atomic_moments(mu, 6), 6)
    expected = {(2 * k,): lam**k / math.factorial(2 * k) for k in range(4)}
    assert D == ConstSeries.make(1, 6, expected)


def test_classification_and_errors():
    assert isinstance(d1([1, 1]), CGroupElement)
    assert isinstance(d1([0, 1]), CAlgebraElement)
    with pytest.raises(DimensionError):
        mul(d1([1, 1]), ConstSeries.identity(1, 4))
    with pytest.raises(ValueError):
        inv(d1([0, 1]))
    with pytest.raises(ValueError):
        log(d1([2, 1]))
    with pytest.raises(ValueError):
        exp(d1([1, 1]))


def test_apply_matches_operator():
    A = translation(F(1, 2), 3)
    x = Polynomial.var(0)
    assert A.apply(x**3) == (x + F(1, 2)) ** 3


@given(st.data())
def test_group_axioms(data):
    n, order = data.draw(st.integers(1, 3)), data.draw(st.integers(0, 4))
    A, B, C = (data.draw(group_elements(n=n, order=order)) for _ in range(3))
    assert mul(mul(A, B), C) == mul(A, mul(B, C))
    assert mul(A, B) == mul(B, A)
    assert inv(inv(A)) == A


@given(algebra_elements())
def test_log_exp_roundtrip(A):
    assert log(exp(A)) == A
    assert exp(A) == exp_series(A)


@given(group_elements())
def test_exp_log_roundtrip(A):
    assert exp(log(A)) == A
    assert log(A) == log_series(A)


@given(algebra_elements(n=1, order=5), algebra_elements(n=1, order=5))
def test_exp_is_a_homomorphism(A, B):
    assert exp(A + B) == mul(exp(A), exp(B))


def test_sequence_product_is_convolution():
    rng = random.Random(11)
    for _ in range(10):
        s = Sequence1D([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(7)])
        t = Sequence1D([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(7)])
        assert mul(from_sequence(s, 6), from_sequence(t, 6)) == from_sequence(convolve(s, t), 6)
