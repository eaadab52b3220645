import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from polypreserve.cgroup import ConstSeries
from polypreserve.momseq import (
    AtomicMeasure,
    FewerAtoms,
    LevyTriplet,
    Sequence1D,
    additive_convolve,
    atomic_moments,
    convolve,
    exact_psd,
    generator_check_1d,
    hadamard,
    hamburger_check,
    hankel,
    hausdorff_check,
    levy_generator,
    multiplicative_convolve,
    psd_verdict,
    recover_atoms,
    riesz_apply,
    stieltjes_check,
)
from polypreserve.polyalg import Polynomial

x = Polynomial.var(0)
harmonic = Sequence1D([F(1, k + 1) for k in range(9)])
factorials = Sequence1D([math.factorial(k) for k in range(9)])


def test_riesz_apply():
    assert riesz_apply(harmonic, x) == F(1, 2)
    assert riesz_apply(harmonic, Polynomial.zero(1)) == 0
    y = F(-3, 2)
    p = x**3 - 2 * x + 5
    assert riesz_apply(atomic_moments(AtomicMeasure.dirac(y), 3), p) == p.eval(y)


def test_hankel_examples():
    assert hankel([1, 0, 1, 0, 1], 1, exact=True).tolist() == [[1, 0], [0, 1]]
    H = hankel(harmonic, 1, exact=True)
    assert H.tolist() == [[1, F(1, 2)], [F(1, 2), F(1, 3)]]
    assert H[0][0] * H[1][1] - H[0][1] ** 2 == F(1, 12)
    t = 0.013
    lam = [math.exp(t * k**3) for k in range(5)]
    det = np.linalg.det(hankel(lam, 2))
    ref = math.exp(72 * t) - math.exp(66 * t) - math.exp(54 * t) + 2 * math.exp(36 * t) - math.exp(24 * t)
    assert det == pytest.approx(ref, rel=1e-6)


def test_hamburger_examples():
    mu = AtomicMeasure([(F(-1), F(1, 4)), (F(2), F(3, 4))])
    assert hamburger_check(atomic_moments(mu, 8)).passed
    gap = hamburger_check([1, 0, 0, 1, 0, 0, 0])
    assert not gap.passed and gap.failure.order == 2
    assert hamburger_check(factorials).passed


def test_borderline_verdict():
    rep = hamburger_check([1, 0, 1, 0, 1])
    assert rep.passed and rep.borderline
    assert rep.verdict == "pass-necessary"
    assert rep.to_csv().splitlines()[0] == "order,min_eigenvalue,verdict"


def test_stieltjes_examples():
    assert stieltjes_check(factorials).passed
    rep = stieltjes_check(atomic_moments(AtomicMeasure.dirac(-1), 6))
    assert not rep.passed and rep.failure.family == "shifted"
    assert stieltjes_check([0] * 7).passed


def test_hausdorff_examples():
    rep = hausdorff_check(harmonic)
    assert rep.passed
    for (m, p), v in rep.differences.items():
        assert v == F(math.factorial(m[0]) * math.factorial(p[0]), math.factorial(m[0] + p[0] + 1))
    rep = hausdorff_check([2**k for k in range(5)])
    assert rep.witness == ((0,), (1,)) and rep.differences[((0,), (1,))] == -1
    rep = hausdorff_check(atomic_moments(AtomicMeasure.dirac(1), 5))
    assert all(v == 0 for (m, p), v in rep.differences.items() if p[0] >= 1)


def test_convolution_examples():
    s = Sequence1D([F(k * k + 1, 3) for k in range(6)])
    unit = Sequence1D([1, 0, 0, 0, 0, 0])
    assert convolve(s, unit) == s
    a, b = F(1, 2), F(-7, 3)
    assert convolve(atomic_moments(AtomicMeasure.dirac(a), 5), atomic_moments(AtomicMeasure.dirac(b), 5)) == atomic_moments(
        AtomicMeasure.dirac(a + b), 5
    )


def test_hadamard_examples():
    s = Sequence1D([F(k, 7) for k in range(6)])
    assert hadamard(s, [1] * 6) == s
    X, Y = (F(1, 2), F(3)), (F(-2), F(2, 5))
    lhs = hadamard(atomic_moments(AtomicMeasure.dirac(X), 4), atomic_moments(AtomicMeasure.dirac(Y), 4))
    assert lhs == atomic_moments(AtomicMeasure.dirac((X[0] * Y[0], X[1] * Y[1])), 4)
    t = F(3, 2)
    prod = hadamard([t**k for k in range(9)], factorials)
    assert prod == Sequence1D([math.factorial(k) * t**k for k in range(9)])
    assert hamburger_check(prod).passed


def test_atomic_moment_examples():
    assert atomic_moments(AtomicMeasure.dirac(0), 4) == Sequence1D([1, 0, 0, 0, 0])
    mu = AtomicMeasure([(F(-3), F(1, 2)), (F(3), F(1, 2))])
    assert atomic_moments(mu, 6) == Sequence1D([1, 0, 9, 0, 81, 0, 729])


def test_additive_convolution_examples():
    a, b = F(2), F(-5, 3)
    assert additive_convolve(AtomicMeasure.dirac(a), AtomicMeasure.dirac(b)) == AtomicMeasure.dirac(a + b)
    mu = AtomicMeasure([(F(1), F(1, 3)), (F(4), F(2, 3))])
    assert additive_convolve(mu, AtomicMeasure.dirac(0)) == mu
    sym = AtomicMeasure([(F(-1), F(1, 2)), (F(1), F(1, 2))])
    assert additive_convolve(sym, sym) == AtomicMeasure([(F(-2), F(1, 4)), (F(0), F(1, 2)), (F(2), F(1, 4))])


def test_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure([(0, 0)])
    assert AtomicMeasure([(1, 1), (1, 2)]) == AtomicMeasure([(1, 3)])


def test_recover_examples():
    t = F(9, 4)
    mu = recover_atoms([1, 0, t, 0, t * t], 2).sorted()
    assert mu == AtomicMeasure([(F(-3, 2), F(1, 2)), (F(3, 2), F(1, 2))])
    assert recover_atoms(atomic_moments(AtomicMeasure.dirac(F(7, 3)), 2), 1) == AtomicMeasure.dirac(F(7, 3))
    mu = AtomicMeasure([(F(0), F(1, 3)), (F(3), F(2, 3))])
    assert recover_atoms(atomic_moments(mu, 4), 2).sorted() == mu
    with pytest.raises(FewerAtoms):
        recover_atoms(atomic_moments(AtomicMeasure.dirac(1), 4), 2)


def test_support_restriction():
    # riesz(s, g) = 0 for g = (x - 1)^2 (x + 2)^2 >= 0 forces the atoms into {1, -2}
    mu = AtomicMeasure([(F(1), F(2, 5)), (F(-2), F(3, 5))])
    s = atomic_moments(mu, 6)
    g = (x - 1) ** 2 * (x + 2) ** 2
    assert riesz_apply(s, g) == 0
    rec = recover_atoms(s, 2)
    assert all(g.eval(p[0]) == 0 for p in rec.points)


def test_exact_psd():
    assert exact_psd([[1, 1], [1, 1]])
    assert not exact_psd([[1, 2], [2, 1]])
    assert not exact_psd([[0, 1], [1, 0]])
    ev, verdict, exact = psd_verdict([[F(1), F(1)], [F(1), F(1)]])
    assert verdict == "borderline" and exact


def test_levy_generator_examples():
    a = F(3, 2)
    A = levy_generator(LevyTriplet([a], [[0]], AtomicMeasure()), 4)
    assert A == ConstSeries.make(1, 4, {(1,): a})
    A = levy_generator(LevyTriplet([0], [[2]], AtomicMeasure()), 4)
    assert A == ConstSeries.make(1, 4, {(2,): 1})
    lam = F(2)
    A = levy_generator(LevyTriplet([F(1, 3)], [[0]], AtomicMeasure([(1, lam)])), 6)
    assert A[(1,)] == F(1, 3) + lam
    assert all(A[(k,)] * math.factorial(k) == lam for k in range(2, 7))


def test_compound_poisson_against_mixture_moments():
    # exp(A) has the moments of Poisson(lam); compare with the truncated mixture sum_m w_m delta_m
    from polypreserve.cgroup import exp

    lam = F(1, 2)
    E = exp(levy_generator(LevyTriplet([0], [[0]], AtomicMeasure([(1, lam)])), 5))
    moments = [math.factorial(k) * E[(k,)] for k in range(6)]
    w = [math.exp(-0.5) * 0.5**m / math.factorial(m) for m in range(60)]
    ref = [sum(wm * m**k for m, wm in enumerate(w)) for k in range(6)]
    assert [float(v) for v in moments] == pytest.approx(ref, rel=1e-12)


def test_generator_check_examples():
    assert generator_check_1d(ConstSeries.partial(1, 6, 0, 1, 5)).passed
    assert not generator_check_1d(ConstSeries.partial(1, 6, 0, 3, 1)).passed
    assert generator_check_1d(ConstSeries.partial(1, 6, 0, 2, 1)).passed


@st.composite
def measures(draw, n=1, max_atoms=3):
    k = draw(st.integers(1, max_atoms))
    pts = draw(st.lists(st.tuples(*[rationals] * n), min_size=k, max_size=k, unique=True))
    ws = draw(st.lists(st.fractions(min_value=F(1, 9), max_value=3, max_denominator=9), min_size=k, max_size=k))
    return AtomicMeasure(list(zip(pts, ws)))


@given(measures(), measures())
def test_moments_of_convolution(mu, nu):
    N = 6
    assert atomic_moments(additive_convolve(mu, nu), N) == convolve(atomic_moments(mu, N), atomic_moments(nu, N))


@given(measures(n=2, max_atoms=2), measures(n=2, max_atoms=2))
def test_moments_of_product_image(mu, nu):
    N = 4
    assert atomic_moments(multiplicative_convolve(mu, nu), N) == hadamard(atomic_moments(mu, N), atomic_moments(nu, N))


@given(measures(max_atoms=4))
def test_hamburger_passes_on_atomic_moments(mu):
    assert hamburger_check(atomic_moments(mu, 8)).passed


@given(measures(n=2, max_atoms=3))
def test_hamburger_passes_in_2d(mu):
    assert hamburger_check(atomic_moments(mu, 4)).passed
