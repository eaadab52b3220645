from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polypreserve.cgroup import ConstSeries
from polypreserve.polyalg import Polynomial, multi_indices

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polynomials(draw, n=1, max_deg=4, coeffs=rationals):
    d = draw(st.integers(min_value=0, max_value=max_deg))
    alphas = multi_indices(n, d)
    vals = draw(st.lists(coeffs, min_size=len(alphas), max_size=len(alphas)))
    return Polynomial(n, dict(zip(alphas, vals)))


@st.composite
def const_series(draw, n=None, order=None, c0=None):
    n = draw(st.integers(1, 2)) if n is None else n
    order = draw(st.integers(0, 5)) if order is None else order
    alphas = multi_indices(n, order)
    vals = draw(st.lists(rationals, min_size=len(alphas), max_size=len(alphas)))
    coeffs = dict(zip(alphas, vals))
    if c0 is not None:
        coeffs[(0,) * n] = Fraction(c0)
    return ConstSeries.make(n, order, coeffs)


def group_elements(**kw):
    return const_series(c0=1, **kw)


def algebra_elements(**kw):
    return const_series(c0=0, **kw)
