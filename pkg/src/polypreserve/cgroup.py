"""Constant-coefficient operators sum_alpha c_alpha d^alpha restricted to degree <= d.

Elements with c_0 = 1 form a commutative group under composition, elements
with c_0 = 0 an algebra; truncated exp and log are mutually inverse
bijections between the two. All arithmetic is exact over the rationals.

Composition of constant-coefficient operators is the Cauchy product of their
coefficient arrays, so every operation here is a graded recursion over
multi-indices |gamma| <= d.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping

from .polyalg import (
    DimensionError,
    MultiIndex,
    Polynomial,
    Scalar,
    TruncationError,
    grlex_key,
    mi_factorial,
    mi_sub,
    multi_indices,
    sub_indices,
    to_scalar,
)


@lru_cache(maxsize=64)
def _pair_table(n: int, d: int):
    # for each gamma (graded order): all (alpha, gamma - alpha) with alpha != 0
    table = []
    zero = (0,) * n
    for gamma in multi_indices(n, d):
        pairs = [(a, mi_sub(gamma, a)) for a in sub_indices(gamma) if a != zero]
        pairs.sort(key=lambda p: grlex_key(p[0]))
        table.append((gamma, sum(gamma), tuple(pairs)))
    return tuple(table)


class ConstSeries:
    """Truncated constant-coefficient operator on R[x_1..x_n]_{<=order}."""

    __slots__ = ("n", "order", "coeffs")

    def __init__(self, n: int, order: int, coeffs: Mapping[MultiIndex, Scalar] | None = None):
        self.n = n
        self.order = order
        clean: Dict[MultiIndex, Scalar] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n:
                raise DimensionError(f"multi-index {alpha} has wrong length for n={n}")
            if sum(alpha) > order:
                continue
            c = to_scalar(c)
            if c != 0:
                clean[alpha] = c
        self.coeffs = clean
        self._validate()

    def _validate(self):
        pass

    @staticmethod
    def make(n: int, order: int, coeffs) -> "ConstSeries":
        """Build and classify: c_0 = 1 gives a group element, c_0 = 0 an algebra element."""
        c0 = coeffs.get((0,) * n, 0)
        if c0 == 1:
            return CGroupElement(n, order, coeffs)
        if c0 == 0:
            return CAlgebraElement(n, order, coeffs)
        return ConstSeries(n, order, coeffs)

    @classmethod
    def identity(cls, n: int, order: int) -> "CGroupElement":
        return CGroupElement(n, order, {(0,) * n: 1})

    @classmethod
    def zero(cls, n: int, order: int) -> "CAlgebraElement":
        return CAlgebraElement(n, order, {})

    @classmethod
    def partial(cls, n: int, order: int, i: int = 0, k: int = 1, c=1) -> "ConstSeries":
        """c * d_i^k."""
        alpha = [0] * n
        alpha[i] = k
        return ConstSeries.make(n, order, {tuple(alpha): c})

    def __getitem__(self, alpha) -> Scalar:
        if isinstance(alpha, int):
            alpha = (alpha,)
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def dense(self) -> list:
        """Coefficients in graded-lex order for all |alpha| <= order."""
        return [self[a] for a in multi_indices(self.n, self.order)]

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs.values())

    def _check(self, other: "ConstSeries"):
        if self.n != other.n or self.order != other.order:
            raise DimensionError(
                f"mismatch: (n={self.n}, d={self.order}) vs (n={other.n}, d={other.order})"
            )

    def restrict(self, order: int) -> "ConstSeries":
        if order > self.order:
            raise TruncationError("cannot extend a truncated series")
        return ConstSeries.make(self.n, order, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ConstSeries):
            return NotImplemented
        return (self.n, self.order, self.coeffs) == (other.n, other.order, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
        return f"{type(self).__name__}(n={self.n}, order={self.order}, {dict(items)!r})"

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return ConstSeries.make(self.n, self.order, out)

    def __neg__(self):
        return ConstSeries.make(self.n, self.order, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ConstSeries":
        c = to_scalar(c)
        return ConstSeries.make(self.n, self.order, {a: c * v for a, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, ConstSeries):
            return self.scale(other)
        return mul(self, other)

    def __pow__(self, k: int):
        out = ConstSeries.identity(self.n, self.order)
        for _ in range(k):
            out = mul(out, self)
        return out

    def apply(self, p: Polynomial) -> Polynomial:
        if p.n != self.n:
            raise DimensionError("dimension mismatch")
        if p.deg > self.order:
            raise TruncationError(f"deg p = {p.deg} exceeds operator order {self.order}")
        out = Polynomial.zero(self.n)
        for alpha, c in self.coeffs.items():
            if sum(alpha) <= p.deg:
                out = out + p.derive(alpha).scale(c)
        return out

    def moment_sequence(self) -> Dict[MultiIndex, Scalar]:
        """alpha! * c_alpha: the sequence s with D(s) = self."""
        return {a: mi_factorial(a) * self[a] for a in multi_indices(self.n, self.order)}


class CGroupElement(ConstSeries):
    """Group element: constant coefficient exactly 1."""

    __slots__ = ()

    def _validate(self):
        if self.coeffs.get((0,) * self.n, 0) != 1:
            raise ValueError("group elements need constant coefficient 1")


class CAlgebraElement(ConstSeries):
    """Algebra element: constant coefficient exactly 0."""

    __slots__ = ()

    def _validate(self):
        if self.coeffs.get((0,) * self.n, 0) != 0:
            raise ValueError("algebra elements need constant coefficient 0")


def mul(A: ConstSeries, B: ConstSeries) -> ConstSeries:
    """Composition AB = BA: truncated Cauchy product of the coefficient arrays."""
    A._check(B)
    a, b = A.coeffs, B.coeffs
    zero = (0,) * A.n
    a0 = a.get(zero, 0)
    out = {}
    for gamma, _, pairs in _pair_table(A.n, A.order):
        acc = a0 * b.get(gamma, 0)
        for alpha, beta in pairs:
            ca = a.get(alpha)
            if ca is not None:
                cb = b.get(beta)
                if cb is not None:
                    acc += ca * cb
        if acc != 0:
            out[gamma] = acc
    return ConstSeries.make(A.n, A.order, out)


def inv(A: ConstSeries) -> CGroupElement:
    """Unique B with AB = 1, by the graded recursion b_gamma = -sum_{alpha != 0} a_alpha b_{gamma-alpha}."""
    zero = (0,) * A.n
    if A.coeffs.get(zero, 0) != 1:
        raise ValueError("inverse needs constant coefficient 1")
    a = A.coeffs
    b: Dict[MultiIndex, Scalar] = {}
    for gamma, deg, pairs in _pair_table(A.n, A.order):
        if deg == 0:
            b[gamma] = Fraction(1)
            continue
        acc = 0
        for alpha, beta in pairs:
            ca = a.get(alpha)
            if ca is not None:
                cb = b.get(beta)
                if cb is not None:
                    acc += ca * cb
        if acc != 0:
            b[gamma] = -acc
    return CGroupElement(A.n, A.order, b)


def exp(A: ConstSeries) -> CGroupElement:
    """Truncated exponential sum_{k<=d} A^k / k! of an algebra element.

    Computed coefficientwise from the Euler-operator identity
    |gamma| F_gamma = sum_{alpha+beta=gamma} |alpha| A_alpha F_beta, which is
    exact and equal to the power sum, at a fraction of its cost.
    """
    zero = (0,) * A.n
    if A.coeffs.get(zero, 0) != 0:
        raise ValueError("exp needs constant coefficient 0")
    a = A.coeffs
    f: Dict[MultiIndex, Scalar] = {}
    for gamma, deg, pairs in _pair_table(A.n, A.order):
        if deg == 0:
            f[gamma] = Fraction(1)
            continue
        acc = 0
        for alpha, beta in pairs:
            ca = a.get(alpha)
            if ca is not None:
                fb = f.get(beta)
                if fb is not None:
                    acc += sum(alpha) * ca * fb
        if acc != 0:
            f[gamma] = acc / deg
    return CGroupElement(A.n, A.order, f)


def log(A: ConstSeries) -> CAlgebraElement:
    """Truncated logarithm -sum_{k<=d} (1 - A)^k / k of a group element (same recursion as exp)."""
    zero = (0,) * A.n
    if A.coeffs.get(zero, 0) != 1:
        raise ValueError("log needs constant coefficient 1")
    g = A.coeffs
    lo: Dict[MultiIndex, Scalar] = {}
    for gamma, deg, pairs in _pair_table(A.n, A.order):
        if deg == 0:
            continue
        acc = 0
        for alpha, beta in pairs:
            if beta == zero:
                continue
            la = lo.get(alpha)
            if la is not None:
                gb = g.get(beta)
                if gb is not None:
                    acc += sum(alpha) * la * gb
        val = g.get(gamma, 0) - (acc / deg if isinstance(acc, float) else Fraction(acc) / deg)
        if val != 0:
            lo[gamma] = val
    return CAlgebraElement(A.n, A.order, lo)


def exp_series(A: ConstSeries) -> CGroupElement:
    """Literal power sum sum_{k=0}^{d} A^k/k! (reference route for exp)."""
    out = ConstSeries.identity(A.n, A.order)
    term = ConstSeries.identity(A.n, A.order)
    for k in range(1, A.order + 1):
        term = mul(term, A).scale(Fraction(1, k))
        out = out + term
    return CGroupElement(A.n, A.order, out.coeffs)


def log_series(A: ConstSeries) -> CAlgebraElement:
    """Literal sum -sum_{k=1}^{d} (1 - A)^k / k (reference route for log)."""
    one = ConstSeries.identity(A.n, A.order)
    x = one - A
    out = ConstSeries.zero(A.n, A.order)
    power = one
    for k in range(1, A.order + 1):
        power = mul(power, x)
        out = out - power.scale(Fraction(1, k))
    return CAlgebraElement(A.n, A.order, out.coeffs)


def from_sequence(s, d: int, n: int | None = None) -> ConstSeries:
    """D(s) = sum_{|alpha|<=d} s_alpha / alpha! d^alpha.

    ``s`` may be a SequenceND/Sequence1D, a mapping alpha -> value, or a plain
    list (univariate).
    """
    values = getattr(s, "values", s)
    if isinstance(values, (list, tuple)):
        values = {(k,): v for k, v in enumerate(values)}
        n = 1
    if n is None:
        n = getattr(s, "n", None) or len(next(iter(values)))
    coeffs = {}
    for alpha in multi_indices(n, d):
        if alpha not in values:
            raise TruncationError(f"sequence undefined at {alpha}")
        v = to_scalar(values[alpha])
        f = mi_factorial(alpha)
        coeffs[alpha] = v / Fraction(f) if isinstance(v, Fraction) else v / f
    return ConstSeries.make(n, d, coeffs)


def translation(t, order: int) -> CGroupElement:
    """exp(t d/dx) on R[x]_{<=order}: sum t^k / k! d^k."""
    t = to_scalar(t)
    return CGroupElement(1, order, {(k,): t**k / math.factorial(k) for k in range(order + 1)})
