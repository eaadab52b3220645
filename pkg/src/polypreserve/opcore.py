"""Linear operators on polynomials in canonical form T = sum_alpha q_alpha d^alpha."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Mapping

from .cgroup import ConstSeries
from .polyalg import (
    DimensionError,
    MultiIndex,
    Polynomial,
    Scalar,
    TruncationError,
    grlex_key,
    mi_binom,
    mi_factorial,
    mi_leq,
    multi_indices,
    sub_indices,
    to_scalar,
)


class OperatorSeries:
    """Finite canonical representation alpha -> q_alpha for |alpha| <= order.

    Applying the operator to a polynomial of degree above ``order`` raises
    :class:`TruncationError` instead of silently dropping terms.
    """

    __slots__ = ("n", "order", "coeffs")

    def __init__(self, n: int, order: int, coeffs: Mapping[MultiIndex, Polynomial] | None = None):
        self.n = n
        self.order = order
        clean: Dict[MultiIndex, Polynomial] = {}
        for alpha, q in (coeffs or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != n:
                raise DimensionError(f"multi-index {alpha} has wrong length for n={n}")
            if sum(alpha) > order:
                raise TruncationError(f"|{alpha}| exceeds order {order}")
            if not isinstance(q, Polynomial):
                q = Polynomial.const(q, n)
            if q.n != n:
                raise DimensionError("coefficient polynomial has wrong dimension")
            if not q.is_zero():
                clean[alpha] = q
        self.coeffs = clean

    @classmethod
    def from_const(cls, c: ConstSeries) -> "OperatorSeries":
        return cls(c.n, c.order, {a: Polynomial.const(v, c.n) for a, v in c.coeffs.items()})

    @classmethod
    def identity(cls, n: int, order: int) -> "OperatorSeries":
        return cls(n, order, {(0,) * n: Polynomial.const(1, n)})

    def __getitem__(self, alpha) -> Polynomial:
        if isinstance(alpha, int):
            alpha = (alpha,)
        return self.coeffs.get(tuple(alpha), Polynomial.zero(self.n))

    def __eq__(self, other):
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        return (self.n, self.order, self.coeffs) == (other.n, other.order, other.coeffs)

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
        body = ", ".join(f"{a}: {q}" for a, q in items)
        return f"OperatorSeries(n={self.n}, order={self.order}, {{{body}}})"

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        if (self.n, self.order) != (other.n, other.order):
            raise DimensionError("operator shapes differ")
        out = dict(self.coeffs)
        for a, q in other.coeffs.items():
            out[a] = out[a] + q if a in out else q
        return OperatorSeries(self.n, self.order, out)

    def scale(self, c) -> "OperatorSeries":
        return OperatorSeries(self.n, self.order, {a: q.scale(c) for a, q in self.coeffs.items()})

    @property
    def degree_preserving(self) -> bool:
        return is_degree_preserving(self)

    def matrix(self, d: int | None = None):
        """Matrix of the operator on the monomial basis of R[x]_{<=d} (graded-lex), as Fractions.

        Column j holds the coordinates of T(x^{beta_j}). Only meaningful when the
        images stay inside R[x]_{<=d}; raises otherwise.
        """
        d = self.order if d is None else d
        basis = multi_indices(self.n, d)
        index = {b: i for i, b in enumerate(basis)}
        cols = []
        for beta in basis:
            img = apply(self, Polynomial.monomial(beta))
            col = [Fraction(0)] * len(basis)
            for g, c in img.terms.items():
                if g not in index:
                    raise TruncationError(f"T x^{beta} leaves R[x]_<={d}")
                col[index[g]] = c
            cols.append(col)
        return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))], basis


def apply(T: OperatorSeries, p: Polynomial, finite: bool = False) -> Polynomial:
    """sum_alpha q_alpha * d^alpha p, exactly.

    ``finite=True`` reads T as the exact differential operator it lists, so
    inputs of any degree are accepted.
    """
    if p.n != T.n:
        raise DimensionError("dimension mismatch")
    if not finite and p.deg > T.order:
        raise TruncationError(f"deg p = {p.deg} exceeds operator order {T.order}")
    out = Polynomial.zero(T.n)
    for alpha, q in T.coeffs.items():
        if sum(alpha) <= p.deg:
            dp = p.derive(alpha)
            if not dp.is_zero():
                out = out + q * dp
    return out


def extract_canonical(action: Callable[[Polynomial], Polynomial], n: int, D: int) -> OperatorSeries:
    """Recover the unique q_alpha (|alpha| <= D) from a black-box linear map.

    Monomials are probed in graded-lex order and
    q_beta = (T x^beta - sum_{alpha < beta} q_alpha d^alpha x^beta) / beta!.
    """
    coeffs: Dict[MultiIndex, Polynomial] = {}
    for beta in multi_indices(n, D):
        xb = Polynomial.monomial(beta)
        rest = action(xb)
        if not isinstance(rest, Polynomial):
            rest = Polynomial.const(rest, n)
        for alpha, q in coeffs.items():
            if alpha != beta and mi_leq(alpha, beta):
                rest = rest - q * xb.derive(alpha)
        if not rest.is_zero():
            coeffs[beta] = rest.scale(Fraction(1, mi_factorial(beta)))
    return OperatorSeries(n, D, coeffs)


def is_degree_preserving(T: OperatorSeries) -> bool:
    """deg q_alpha <= |alpha| for every stored alpha."""
    return all(q.deg <= sum(a) for a, q in T.coeffs.items())


@dataclass(frozen=True)
class DiagonalOperator:
    """T x^alpha = t_alpha x^alpha, equivalently T = sum c_alpha / alpha! x^alpha d^alpha."""

    n: int
    order: int
    t: Dict[MultiIndex, Scalar]
    c: Dict[MultiIndex, Scalar]

    def to_operator(self) -> OperatorSeries:
        return diagonal_operator(self.c, self.n, self.order, kind="c")


@dataclass(frozen=True)
class NotDiagonal:
    """Smallest monomial (graded-lex) whose image is not a multiple of itself."""

    monomial: MultiIndex
    image: Polynomial

    def __bool__(self):
        return False


def to_diagonal(T: OperatorSeries) -> DiagonalOperator | NotDiagonal:
    t = {}
    for alpha in multi_indices(T.n, T.order):
        img = apply(T, Polynomial.monomial(alpha))
        if any(g != alpha for g in img.terms):
            return NotDiagonal(alpha, img)
        t[alpha] = img.coeff(alpha)
    return DiagonalOperator(T.n, T.order, t, diagonal_relations(t, kind="t"))


def diagonal_relations(seq: Mapping[MultiIndex, Scalar], kind: str = "t") -> Dict[MultiIndex, Scalar]:
    """Binomial transform between the diagonal sequence t and coefficient sequence c.

    ``kind="c"`` maps c -> t (t_a = sum_{b<=a} binom(a,b) c_b); ``kind="t"``
    maps t -> c (c_a = sum_{b<=a} (-1)^{|a-b|} binom(a,b) t_b).
    """
    if kind not in ("t", "c"):
        raise ValueError("kind must be 't' or 'c'")
    seq = {tuple(a): to_scalar(v) for a, v in seq.items()}
    out = {}
    for alpha in seq:
        acc = Fraction(0)
        for beta in sub_indices(alpha):
            if beta not in seq:
                raise TruncationError(f"sequence undefined at {beta}")
            w = mi_binom(alpha, beta)
            if kind == "t" and (sum(alpha) - sum(beta)) % 2:
                w = -w
            acc = acc + w * seq[beta]
        out[alpha] = acc
    return out


def diagonal_operator(seq: Mapping[MultiIndex, Scalar], n: int, order: int, kind: str = "t") -> OperatorSeries:
    """Canonical form sum c_alpha/alpha! x^alpha d^alpha from t (kind='t') or c (kind='c')."""
    full = {a: seq.get(a, 0) for a in multi_indices(n, order)}
    c = diagonal_relations(full, "t") if kind == "t" else {a: to_scalar(v) for a, v in full.items()}
    return OperatorSeries(
        n, order,
        {a: Polynomial.monomial(a, Fraction(1, mi_factorial(a)) * v) for a, v in c.items() if v != 0},
    )


def freeze(T: OperatorSeries, y) -> ConstSeries:
    """T_y = sum q_alpha(y) d^alpha: same value as T f at the point y for every f."""
    if isinstance(y, (int, float, Fraction)):
        y = (y,)
    y = tuple(y)
    if len(y) != T.n:
        raise DimensionError("point dimension mismatch")
    return ConstSeries.make(T.n, T.order, {a: q.eval(y) for a, q in T.coeffs.items()})


def moment_data(T: OperatorSeries, y) -> Dict[MultiIndex, Scalar]:
    """(alpha! q_alpha(y))_{|alpha| <= order}, the sequence whose moment property decides positivity."""
    return freeze(T, y).moment_sequence()


def multiplication(p: Polynomial, order: int) -> OperatorSeries:
    """f -> p*f."""
    return OperatorSeries(p.n, order, {(0,) * p.n: p})


def point_evaluation(y, order: int) -> OperatorSeries:
    """f -> f(y) (a constant), with q_alpha = (y - x)^alpha / alpha!."""
    if isinstance(y, (int, float, Fraction)):
        y = (y,)
    n = len(y)
    coeffs = {}
    for alpha in multi_indices(n, order):
        q = Polynomial.const(Fraction(1, mi_factorial(alpha)), n)
        for i, a in enumerate(alpha):
            q = q * (Polynomial.const(y[i], n) - Polynomial.var(i, n)) ** a
        coeffs[alpha] = q
    return OperatorSeries(n, order, coeffs)


def compose(S: OperatorSeries, T: OperatorSeries) -> OperatorSeries:
    """S o T, re-extracted in canonical form (both must be degree preserving)."""
    if (S.n, S.order) != (T.n, T.order):
        raise DimensionError("operator shapes differ")
    return extract_canonical(lambda p: apply(S, apply(T, p)), S.n, S.order)


__all__ = [
    "OperatorSeries",
    "DiagonalOperator",
    "NotDiagonal",
    "apply",
    "extract_canonical",
    "is_degree_preserving",
    "to_diagonal",
    "diagonal_relations",
    "diagonal_operator",
    "freeze",
    "moment_data",
    "multiplication",
    "point_evaluation",
    "compose",
]
