"""Exact multivariate polynomials over the rationals.

A polynomial in ``n`` variables is a map from exponent tuples to coefficients.
Coefficients are :class:`fractions.Fraction` whenever the input is rational;
floats are tolerated (numeric certificates carry them) and propagate through
arithmetic the usual way.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

MultiIndex = Tuple[int, ...]
Scalar = Union[Fraction, float, int]

#: Degree of the zero polynomial.
NEG_INF = float("-inf")


class DimensionError(ValueError):
    """Operands live in different numbers of variables."""


class TruncationError(ValueError):
    """A truncated object was asked about degrees beyond its order."""


def to_scalar(c) -> Scalar:
    """Normalize a coefficient: rationals become Fractions, floats stay floats."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, Rational):
        return Fraction(c)
    if isinstance(c, float):
        return c
    if isinstance(c, str):
        return Fraction(c)
    # numpy scalars and friends
    if hasattr(c, "dtype"):
        if c.dtype.kind in "iu":
            return Fraction(int(c))
        return float(c)
    return Fraction(c)


def is_exact(c) -> bool:
    return isinstance(c, Fraction)


# -- multi-indices -----------------------------------------------------------

def grlex_key(alpha: MultiIndex):
    """Sort key: total degree first, then x1 before x2 before ..."""
    return (sum(alpha), tuple(-a for a in alpha))


def multi_indices(n: int, d: int) -> list:
    """All alpha in N_0^n with |alpha| <= d, in graded-lex order."""
    out = []
    for k in range(d + 1):
        out.extend(_exact_degree(n, k))
    return out


def _exact_degree(n: int, k: int) -> Iterator[MultiIndex]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _exact_degree(n - 1, k - first):
            yield (first,) + rest


def mi_leq(beta: MultiIndex, alpha: MultiIndex) -> bool:
    """Componentwise order beta <= alpha."""
    return all(b <= a for b, a in zip(beta, alpha))


def mi_sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a - b for a, b in zip(alpha, beta))


def mi_add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


def mi_factorial(alpha: MultiIndex) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def mi_binom(alpha: MultiIndex, beta: MultiIndex) -> int:
    out = 1
    for a, b in zip(alpha, beta):
        out *= math.comb(a, b)
    return out


def falling(a: int, k: int) -> int:
    """a (a-1) ... (a-k+1)."""
    out = 1
    for j in range(k):
        out *= a - j
    return out


def sub_indices(alpha: MultiIndex) -> Iterator[MultiIndex]:
    """All beta <= alpha."""
    return product(*(range(a + 1) for a in alpha))


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Polynomial in ``n`` variables with canonical (zero-free) term storage."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[MultiIndex, Scalar] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        clean: Dict[MultiIndex, Scalar] = {}
        if terms:
            for alpha, c in terms.items():
                alpha = tuple(int(a) for a in alpha)
                if len(alpha) != n or any(a < 0 for a in alpha):
                    raise ValueError(f"bad exponent {alpha} for n={n}")
                c = to_scalar(c)
                if c != 0:
                    clean[alpha] = clean.get(alpha, 0) + c
                    if clean[alpha] == 0:
                        del clean[alpha]
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, n: int = 1) -> "Polynomial":
        return cls(n)

    @classmethod
    def const(cls, c, n: int = 1) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c=1) -> "Polynomial":
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: c})

    @classmethod
    def var(cls, i: int, n: int = 1) -> "Polynomial":
        alpha = [0] * n
        alpha[i] = 1
        return cls(n, {tuple(alpha): 1})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "Polynomial":
        """Univariate polynomial from ascending coefficients c_0, c_1, ..."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # inspection
    @property
    def deg(self):
        if not self.terms:
            return NEG_INF
        return max(sum(a) for a in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def coeff(self, alpha: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(alpha), Fraction(0))

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.n)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coeffs(self) -> list:
        """Ascending coefficient list of a univariate polynomial."""
        self._need_univariate()
        if not self.terms:
            return []
        out = [Fraction(0)] * (int(self.deg) + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def leading_coeff(self) -> Scalar:
        self._need_univariate()
        if not self.terms:
            return Fraction(0)
        return self.terms[(int(self.deg),)]

    def _need_univariate(self):
        if self.n != 1:
            raise DimensionError("operation needs a univariate polynomial")

    def _check(self, other: "Polynomial"):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    # arithmetic
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.const(other, self.n)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, 0) + c
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: Dict[MultiIndex, Scalar] = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                g = mi_add(a, b)
                terms[g] = terms.get(g, 0) + c * e
        return Polynomial(self.n, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        c = to_scalar(c)
        return self.scale((Fraction(1) if isinstance(c, Fraction) else 1.0) / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.const(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        c = to_scalar(c)
        return Polynomial(self.n, {a: c * v for a, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, float)):
            return self == Polynomial.const(other, self.n)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.n}, {dict(self.sorted_terms())!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["x"] if self.n == 1 else [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for alpha, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if a == 1 else f"{names[i]}^{a}") for i, a in enumerate(alpha) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # calculus
    def __call__(self, *y):
        if len(y) == 1 and isinstance(y[0], (tuple, list)):
            y = tuple(y[0])
        return self.eval(y)

    def eval(self, y):
        """Point evaluation. Exact for rational ``y``; nested Horner for floats."""
        y = _as_point(y, self.n)
        if not self.terms:
            return Fraction(0)
        return _horner(self.terms, y, 0)

    def derive(self, alpha: Sequence[int]) -> "Polynomial":
        """Apply d^alpha with exact falling-factorial coefficients."""
        alpha = tuple(alpha)
        if len(alpha) != self.n:
            raise DimensionError("multi-index length mismatch")
        terms = {}
        for beta, c in self.terms.items():
            if mi_leq(alpha, beta):
                f = 1
                for b, a in zip(beta, alpha):
                    f *= falling(b, a)
                terms[mi_sub(beta, alpha)] = c * f
        return Polynomial(self.n, terms)

    def diff(self, i: int = 0, k: int = 1) -> "Polynomial":
        alpha = [0] * self.n
        alpha[i] = k
        return self.derive(alpha)

    def taylor_shift(self, y) -> "Polynomial":
        """Return q with q(x) = p(x + y)."""
        y = _as_point(y, self.n)
        out = Polynomial.zero(self.n)
        shifted = [Polynomial(self.n, {_unit(self.n, i): 1}) + y[i] for i in range(self.n)]
        powers = [dict() for _ in range(self.n)]
        for alpha, c in self.terms.items():
            term = Polynomial.const(c, self.n)
            for i, a in enumerate(alpha):
                if a:
                    if a not in powers[i]:
                        powers[i][a] = shifted[i] ** a
                    term = term * powers[i][a]
            out = out + term
        return out

    def compose_affine(self, scale, shift) -> "Polynomial":
        """Univariate p(scale*x + shift)."""
        self._need_univariate()
        lin = Polynomial.from_coeffs([shift, scale])
        out = Polynomial.zero(1)
        for c in reversed(self.coeffs()):
            out = out * lin + c
        return out

    def to_float_coeffs(self):
        """Ascending float coefficients (univariate)."""
        return [float(c) for c in self.coeffs()]


def _unit(n: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(n))


def _as_point(y, n: int) -> tuple:
    if isinstance(y, (int, float, Fraction)) or hasattr(y, "dtype") and getattr(y, "ndim", 1) == 0:
        y = (y,)
    y = tuple(y)
    if len(y) != n:
        raise DimensionError(f"point has {len(y)} coordinates, polynomial has {n} variables")
    return tuple(to_scalar(v) for v in y)


def _horner(terms: Mapping[MultiIndex, Scalar], y: tuple, var: int):
    # group by the exponent of variable `var`, recurse on the rest
    if var == len(y):
        return next(iter(terms.values()))
    groups: Dict[int, Dict[MultiIndex, Scalar]] = {}
    for alpha, c in terms.items():
        groups.setdefault(alpha[var], {})[alpha] = c
    top = max(groups)
    acc = 0
    for k in range(top, -1, -1):
        acc = acc * y[var]
        if k in groups:
            acc = acc + _horner(groups[k], y, var + 1)
    return acc


def x(n: int = 1, i: int = 0) -> Polynomial:
    """Shorthand for the i-th coordinate polynomial."""
    return Polynomial.var(i, n)
