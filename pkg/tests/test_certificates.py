import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polypreserve.certificates import (
    BernsteinCert,
    Refusal,
    SosCert,
    bernstein_certificate,
    bernstein_coefficients,
    bernstein_poly,
    bernstein_uniform_error,
    lukacs_markov,
    sos_decompose_R,
    squarefree_factors,
)
from polypreserve.polyalg import DimensionError, Polynomial

x = Polynomial.var(0)
P = Polynomial.from_coeffs


def test_bernstein_of_square_at_degree_two():
    assert bernstein_poly(x * x, 2) == (x + x * x).scale(F(1, 2))


@pytest.mark.parametrize("d", [1, 2, 5, 11])
def test_bernstein_reproduces_linear_functions(d):
    f = P([F(-2, 3), F(7, 5)])
    assert bernstein_poly(f, d) == f


def test_uniform_error_decreases():
    f = x**3 - x.scale(F(1, 2)) + F(1, 7)
    errs = [bernstein_uniform_error(f, d) for d in (8, 16, 32, 64)]
    assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))


def test_bernstein_certificates():
    c = bernstein_certificate(x * (1 - x))
    assert isinstance(c, BernsteinCert) and c.exact and c.reconstruct() == x * (1 - x)
    assert all(v >= 0 for v in c.coeffs)
    q = x * x - x + 1
    c = bernstein_certificate(q)
    assert c and c.reconstruct() == q
    assert c.D == 2


def test_bernstein_refusals():
    r = bernstein_certificate(x - F(1, 2))
    assert isinstance(r, Refusal) and r.reason == "negative"
    assert r.witness < F(1, 2)
    # positive on (0, 1) with a double root at 1/2: no finite certificate
    r = bernstein_certificate((x - F(1, 2)) ** 2, D_max=40)
    assert not r and r.reason == "unknown"


def test_bernstein_coefficients_need_enough_degree():
    with pytest.raises(ValueError):
        bernstein_coefficients(x**3, 2)


@pytest.mark.parametrize("p", [x * x + 1, x * x - 2 * x + 2])
def test_sos_examples(p):
    c = sos_decompose_R(p)
    assert isinstance(c, SosCert) and c.exact
    assert c.f * c.f + c.g * c.g == p


def test_sos_with_irrational_part():
    # (x^2 - 1)^2 + 3x^2 up to rotation: sqrt(3) is carried at high precision
    p = x**4 + x**2 + 1
    c = sos_decompose_R(p)
    assert not c.exact and c.relative_residual <= 1e-30


def test_sos_with_double_real_root():
    p = (x - 3) ** 2 * (x * x + 1)
    c = sos_decompose_R(p)
    assert c and c.relative_residual <= 1e-10


def test_sos_refusals():
    assert sos_decompose_R(x**3 + 1).reason == "negative"
    r = sos_decompose_R(x * x - 1)
    assert not r and r.witness is not None
    assert not sos_decompose_R((x - 1) * (x - 2) * (x * x + 1))
    with pytest.raises(DimensionError):
        sos_decompose_R(Polynomial.var(0, 2))


def test_irrational_roots_give_tiny_residual():
    p = x**4 - 2 * x**2 + 3
    c = sos_decompose_R(p)
    assert c.relative_residual <= 1e-10
    assert c.f.deg <= 2 and c.g.deg <= 1


def test_lukacs_markov_examples():
    c = lukacs_markov(x * (1 - x), 0, 1)
    assert c.kind == "even" and c.exact and c.reconstruct() == x * (1 - x)
    c = lukacs_markov(x, 0, 1)
    assert c.kind == "odd" and c.exact and c.reconstruct() == x
    p = (x + 1) * (x + 2) * (3 - x)
    c = lukacs_markov(p, -1, 3)
    assert c.kind == "odd" and c.relative_residual <= 1e-30
    assert c.f.deg <= 1 and c.g.deg <= 1
    with pytest.raises(ValueError):
        lukacs_markov(x, 1, 1)
    r = lukacs_markov(x - F(1, 2), 0, 1)
    assert not r and r.reason == "negative"


def test_squarefree_factors():
    p = (x - 1) ** 3 * (x + 2) ** 2 * (x * x + 1)
    facs = squarefree_factors(p)
    prod = Polynomial.const(1)
    for q, k in facs:
        prod = prod * q**k
    assert prod.scale(F(1) / prod.leading_coeff()) == p.scale(F(1) / p.leading_coeff())
    assert sorted(k for _, k in facs) == [1, 2, 3]


def _random_nonnegative_on(a, b, m, rng):
    """Product of factors that are >= 0 on [a, b], of total degree 2m."""
    out = Polynomial.const(F(rng.randint(1, 9), rng.randint(1, 5)))
    deg = 0
    while deg < 2 * m:
        kind = rng.choice(("square", "pair", "quad") if 2 * m - deg >= 2 else ("left",))
        r = F(rng.randint(-20, 20), rng.randint(1, 6))
        if kind == "square":
            out, deg = out * (x - r) ** 2, deg + 2
        elif kind == "quad":
            out, deg = out * ((x - r) ** 2 + F(rng.randint(1, 9), 4)), deg + 2
        elif kind == "pair":
            out = out * (x - (a - F(rng.randint(0, 9), 4))) * ((b + F(rng.randint(0, 9), 4)) - x)
            deg += 2
        else:
            out, deg = out * (x - (a - F(rng.randint(0, 9), 4))), deg + 1
    return out


def test_lukacs_markov_degree_bounds_on_random_inputs():
    rng = random.Random(20240611)
    for _ in range(100):
        m = rng.randint(1, 3)
        p = _random_nonnegative_on(0, 1, m, rng)
        c = lukacs_markov(p, 0, 1)
        assert isinstance(c, SosCert) and c.kind == "even"
        assert c.f.deg <= m and c.g.deg <= m - 1
        assert c.relative_residual <= 1e-10


@settings(max_examples=25)
@given(st.lists(st.fractions(-4, 4, max_denominator=5), min_size=1, max_size=4), st.fractions(0, 3, max_denominator=5))
def test_sos_reconstruction_residual(roots_re, shift):
    p = Polynomial.const(1)
    for r in roots_re:
        p = p * ((x - r) ** 2 + shift)
    c = sos_decompose_R(p)
    scale = 1 + max(abs(float(v)) for v in p.terms.values())
    assert c.residual <= 1e-10 * scale
    assert c.f.deg <= p.deg // 2 and c.g.deg <= p.deg // 2


@settings(max_examples=25)
@given(st.lists(st.fractions(0, 5, max_denominator=6), min_size=1, max_size=6))
def test_bernstein_certificate_reconstructs_exactly(cs):
    # positive coefficients in the basis x^k (1-x)^{D-k}
    D = len(cs) - 1
    f = sum(((x**k) * (1 - x) ** (D - k)).scale(c) for k, c in enumerate(cs))
    if f.is_zero():
        return
    cert = bernstein_certificate(f)
    assert cert and cert.exact and cert.reconstruct() == f and cert.D <= D


@settings(max_examples=20)
@given(st.integers(1, 4), st.integers(2, 16))
def test_bernstein_operator_preserves_positivity_on_samples(k, d):
    f = (x - F(1, 2)) ** (2 * k)
    vals = [float(bernstein_poly(f, d).eval(F(i, 20))) for i in range(21)]
    assert min(vals) >= 0
