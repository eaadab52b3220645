"""K-positivity-preserver and generator checks.

T = sum q_alpha d^alpha maps Pos(K) into itself iff, for every y in K, the
sequence (alpha! q_alpha(y)) is a (K - y)-moment sequence. The checks below
sample y on a finite grid and run truncated moment tests, so a pass only
means that no violation was found. A failure carries a concrete witness: a
polynomial p >= 0 on K with (T p)(y) < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence

import numpy as np

from ._parallel import pmap
from .cgroup import ConstSeries
from .momseq import (
    PSD_RTOL,
    SequenceND,
    as_sequence,
    hausdorff_check,
    moment_matrix,
    psd_verdict,
)
from .opcore import OperatorSeries, apply, extract_canonical, freeze, is_degree_preserving
from .polyalg import DimensionError, Polynomial, multi_indices, to_scalar


# -- K descriptors -------------------------------------------------------------

@dataclass(frozen=True)
class KSet:
    """R^n, a shifted orthant prod [c_i, oo), or a box prod [a_i, b_i]."""

    kind: str
    n: int = 1
    lower: tuple = ()
    upper: tuple = ()

    def __post_init__(self):
        if self.kind not in ("R", "halfline", "box"):
            raise ValueError(f"unsupported K descriptor {self.kind!r}")

    @classmethod
    def real(cls, n: int = 1) -> "KSet":
        return cls("R", n)

    @classmethod
    def halfline(cls, c=0, n: int = 1) -> "KSet":
        return cls("halfline", n, _vec(c, n))

    @classmethod
    def box(cls, a=0, b=1, n: int = 1) -> "KSet":
        lo, hi = _vec(a, n), _vec(b, n)
        if any(l >= h for l, h in zip(lo, hi)):
            raise ValueError("box needs a < b in every coordinate")
        return cls("box", n, lo, hi)

    @classmethod
    def parse(cls, text: str, n: int = 1, a=0, b=1) -> "KSet":
        key = text.strip().lower()
        if key in ("r", "rn", "real"):
            return cls.real(n)
        if key in ("halfline", "half", "r+"):
            return cls.halfline(a, n)
        if key == "box":
            return cls.box(a, b, n)
        raise ValueError(f"unsupported K descriptor {text!r}")

    @property
    def translation_invariant(self) -> bool:
        return self.kind == "R"

    def contains(self, y) -> bool:
        y = _vec(y, self.n)
        if self.kind == "R":
            return True
        if self.kind == "halfline":
            return all(v >= c for v, c in zip(y, self.lower))
        return all(a <= v <= b for v, a, b in zip(y, self.lower, self.upper))

    def default_grid(self, m: int = 9) -> list:
        """Chebyshev-spread rational points in K (R: [-2, 2], halfline: [c, c + 4])."""
        if self.kind == "R":
            lo, hi = (Fraction(-2),) * self.n, (Fraction(2),) * self.n
        elif self.kind == "halfline":
            lo = self.lower
            hi = tuple(c + 4 for c in self.lower)
        else:
            lo, hi = self.lower, self.upper
        if self.n > 1:
            m = max(3, min(m, 5))
        axes = [chebyshev_points(l, h, m) for l, h in zip(lo, hi)]
        return [tuple(p) for p in product(*axes)]

    def describe(self) -> str:
        if self.kind == "R":
            return "R" if self.n == 1 else f"R^{self.n}"
        if self.kind == "halfline":
            return "halfline[" + ",".join(str(c) for c in self.lower) + ")"
        return "box[" + ",".join(f"{a}..{b}" for a, b in zip(self.lower, self.upper)) + "]"


def _vec(v, n: int) -> tuple:
    if np.ndim(v) == 0 and not isinstance(v, (tuple, list)):
        return (to_scalar(v),) * n
    v = tuple(to_scalar(c) for c in v)
    if len(v) != n:
        raise DimensionError("point has the wrong dimension")
    return v


def chebyshev_points(a, b, m: int) -> list:
    """m Chebyshev-Lobatto points on [a, b], rounded to rationals (endpoints kept exact)."""
    a, b = Fraction(a), Fraction(b)
    if m == 1:
        return [(a + b) / 2]
    pts = []
    for j in range(m):
        u = -math.cos(math.pi * j / (m - 1))
        if j == 0:
            r = Fraction(-1)
        elif j == m - 1:
            r = Fraction(1)
        elif abs(u) < 1e-15:
            r = Fraction(0)
        else:
            r = Fraction(u).limit_denominator(1000)
        pts.append(a + (b - a) * (r + 1) / 2)
    return pts


@dataclass
class CheckConfig:
    """Sample grid, truncation order and PSD tolerance."""

    y_grid: list
    order: int
    rtol: float = PSD_RTOL

    def __post_init__(self):
        if not self.y_grid:
            raise ValueError("grid must be nonempty")
        self.y_grid = [tuple(to_scalar(v) for v in (y if isinstance(y, (tuple, list)) else (y,))) for y in self.y_grid]

    @classmethod
    def default(cls, K: KSet, order: int, m: int = 9, rtol: float = PSD_RTOL) -> "CheckConfig":
        return cls(K.default_grid(m), order, rtol)

    def validate(self, K: KSet):
        for y in self.y_grid:
            if len(y) != K.n:
                raise DimensionError(f"grid point {y} has the wrong dimension")
            if not K.contains(y):
                raise ValueError(f"grid point {y} is not in K = {K.describe()}")


# -- verdicts ------------------------------------------------------------------

@dataclass
class Witness:
    """p >= 0 on K with (T p)(y) = value < 0."""

    y: tuple
    family: str
    order: object
    eigenvalue: Optional[float]
    poly: Polynomial
    value: object
    image: Optional[Polynomial] = None

    def to_dict(self):
        return {
            "y": list(self.y),
            "family": self.family,
            "order": list(self.order) if isinstance(self.order, tuple) else self.order,
            "eigenvalue": self.eigenvalue,
            "poly": self.poly,
            "value": self.value,
            "image": self.image,
        }


@dataclass
class PreserverVerdict:
    verdict: str
    K: str
    order: int
    points_checked: int
    witness: Optional[Witness] = None
    borderline: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass-necessary"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "K": self.K,
            "order": self.order,
            "points_checked": self.points_checked,
            "borderline": self.borderline,
            "note": self.note,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


# -- pointwise checks ----------------------------------------------------------------

def _as_operator(T) -> OperatorSeries:
    if isinstance(T, OperatorSeries):
        return T
    if isinstance(T, ConstSeries):
        return OperatorSeries.from_const(T)
    raise TypeError("expected an OperatorSeries or a constant-coefficient series")


def _rational_vector(v: np.ndarray):
    scale = np.max(np.abs(v))
    return [Fraction(float(c / scale)).limit_denominator(10**6) for c in v]


def _quad(M, v):
    return sum(v[j] * M[j][l] * v[l] for j in range(len(v)) for l in range(len(v)))


def _hankel_witness(s: SequenceND, i: int, loc: Optional[Polynomial], y: tuple, n: int):
    """Eigenvector of the failing moment matrix turned into h; returns (h polynomial in u, eigenvalue)."""
    M = moment_matrix(s, i, loc)
    F = np.array([[float(v) for v in row] for row in M])
    w, V = np.linalg.eigh(F)
    v = V[:, 0]
    coeffs = v.tolist()
    exact = all(isinstance(e, Fraction) for row in M for e in row)
    if exact:
        rv = _rational_vector(v)
        if _quad(M, rv) < 0:
            coeffs = rv
    basis = multi_indices(n, i)
    h = Polynomial(n, {a: c for a, c in zip(basis, coeffs)})
    return h, float(w[0])


def _shift_back(h: Polynomial, y: tuple) -> Polynomial:
    """h(x - y)."""
    return h.taylor_shift(tuple(-v for v in y))


def _check_point(T: OperatorSeries, K: KSet, y: tuple, N: int, rtol: float):
    """(failure witness or None, borderline flag) at a single grid point."""
    n = T.n
    s = as_sequence(freeze(T, y).moment_sequence()).truncate(N)
    families = [(None, "hankel")]
    if K.kind == "halfline":
        for i in range(n):
            u = Polynomial.var(i, n)
            families.append((u - (K.lower[i] - y[i]), "shifted" if n == 1 else f"shifted{i + 1}"))
    borderline = False
    for loc, fam in families:
        extra = 0 if loc is None else int(loc.deg)
        i = 0
        while 2 * i + extra <= N:
            ev, verdict, _ = psd_verdict(moment_matrix(s, i, loc), rtol)
            if verdict == "borderline":
                borderline = True
            if verdict == "fail":
                h, ev = _hankel_witness(s, i, loc, y, n)
                p = h * h if loc is None else loc * h * h
                p = _shift_back(p, y)
                image = apply(T, p)
                return Witness(y, fam, i, ev, p, image.eval(y), image), borderline
            i += 1
    if K.kind == "box":
        rep = hausdorff_check(
            s, tuple(a - v for a, v in zip(K.lower, y)), tuple(b - v for b, v in zip(K.upper, y)), rtol
        )
        if not rep.passed:
            m, q = rep.witness
            p = Polynomial.const(1, n)
            for j in range(n):
                xj = Polynomial.var(j, n)
                p = p * (xj - K.lower[j]) ** m[j] * (K.upper[j] - xj) ** q[j]
            image = apply(T, p)
            return Witness(y, "difference", (m, q), None, p, image.eval(y), image), borderline
    return None, borderline


def check_preserver(T, K: KSet, cfg: CheckConfig) -> PreserverVerdict:
    """Truncated moment tests of (alpha! q_alpha(y)) on K - y for every grid point.

    The first failing grid point (grid order) supplies the witness.
    """
    T = _as_operator(T)
    if T.n != K.n:
        raise DimensionError("operator and K have different dimensions")
    cfg.validate(K)
    N = min(cfg.order, T.order)
    results = pmap(lambda y: _check_point(T, K, y, N, cfg.rtol), cfg.y_grid)
    borderline = any(b for _, b in results)
    for wit, _ in results:
        if wit is not None:
            return PreserverVerdict("fail", K.describe(), N, len(cfg.y_grid), wit, borderline)
    return PreserverVerdict(
        "pass-necessary", K.describe(), N, len(cfg.y_grid), None, borderline,
        "no violation found on the grid up to the truncation order",
    )


def check_diagonal_preserver(t, rtol: float = PSD_RTOL) -> PreserverVerdict:
    """Diagonal T x^alpha = t_alpha x^alpha on R^n: the truncated moment tests on t itself."""
    t = as_sequence(t)
    n = t.n
    i = 0
    borderline = False
    while 2 * i <= t.N:
        M = moment_matrix(t, i)
        ev, verdict, _ = psd_verdict(M, rtol)
        borderline |= verdict == "borderline"
        if verdict == "fail":
            h, ev = _hankel_witness(t, i, None, (0,) * n, n)
            p = h * h
            image = Polynomial(n, {a: c * t.values[a] for a, c in p.terms.items()})
            # the diagonal operator at y = (1,...,1) sees exactly L_t(p)
            val = image.eval((1,) * n)
            return PreserverVerdict("fail", "R" if n == 1 else f"R^{n}", t.N, 1,
                                    Witness((1,) * n, "hankel", i, ev, p, val, image), borderline)
        i += 1
    return PreserverVerdict("pass-necessary", "R" if n == 1 else f"R^{n}", t.N, 1, None, borderline,
                            "truncated moment tests passed up to the truncation order")


# -- resolvents ------------------------------------------------------------------

def _exact_inverse(A):
    m = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(A)]
    for col in range(m):
        piv = next((r for r in range(col, m) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(m):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[m:] for row in M]


def _as_lambda(lam) -> Fraction:
    # decimal reading of floats, so 0.1 means 1/10
    if isinstance(lam, float):
        return Fraction(repr(lam))
    return Fraction(lam)


def resolvent_operator(A: OperatorSeries, d: int, lam) -> Optional[OperatorSeries]:
    """(1 - lam A)^{-1} on R[x]_{<=d} in canonical form, or None when singular."""
    M, basis = A.matrix(d)
    lam = _as_lambda(lam)
    m = len(basis)
    B = [[(1 if i == j else 0) - lam * M[i][j] for j in range(m)] for i in range(m)]
    R = _exact_inverse(B)
    if R is None:
        return None
    index = {b: i for i, b in enumerate(basis)}

    def action(p: Polynomial) -> Polynomial:
        x = [Fraction(0)] * m
        for a, c in p.terms.items():
            x[index[a]] = c
        y = [sum(R[i][j] * x[j] for j in range(m) if x[j]) for i in range(m)]
        return Polynomial(A.n, {basis[i]: y[i] for i in range(m)})

    return extract_canonical(action, A.n, d)


@dataclass
class ResolventRow:
    lam: Fraction
    verdict: str
    check: Optional[PreserverVerdict] = None

    def to_dict(self):
        return {
            "lambda": self.lam,
            "verdict": self.verdict,
            "check": None if self.check is None else self.check.to_dict(),
        }


@dataclass
class ResolventReport:
    d: int
    rows: List[ResolventRow] = field(default_factory=list)

    @property
    def eps_bracket(self):
        """(last pass, first fail) scanning lam > 0 upward; None when no change is seen."""
        pos = sorted((r for r in self.rows if r.lam > 0), key=lambda r: r.lam)
        last_pass = Fraction(0)
        for r in pos:
            if r.verdict == "fail":
                return (last_pass, r.lam)
            if r.verdict == "pass-necessary":
                last_pass = r.lam
        return None

    def verdict_at(self, lam) -> str:
        lam = _as_lambda(lam)
        for r in self.rows:
            if r.lam == lam:
                return r.verdict
        raise KeyError(lam)

    def to_dict(self):
        b = self.eps_bracket
        return {
            "d": self.d,
            "eps_bracket": None if b is None else {"lo": b[0], "hi": b[1]},
            "rows": [r.to_dict() for r in self.rows],
        }


def check_resolvent(A: OperatorSeries, d: int, lambdas: Sequence, K: KSet | None = None,
                    cfg: CheckConfig | None = None) -> ResolventReport:
    """Invert 1 - lam A exactly on R[x]_{<=d} and check the result for every lam."""
    A = _as_operator(A)
    if not is_degree_preserving(A):
        raise ValueError("resolvent check needs a degree-preserving operator")
    K = K or KSet.real(A.n)
    cfg = cfg or CheckConfig.default(K, d)
    report = ResolventReport(d)
    for lam in lambdas:
        R = resolvent_operator(A, d, lam)
        lam = _as_lambda(lam)
        if R is None:
            report.rows.append(ResolventRow(lam, "singular"))
            continue
        v = check_preserver(R, K, CheckConfig(cfg.y_grid, d, cfg.rtol))
        report.rows.append(ResolventRow(lam, v.verdict, v))
    return report


# -- generators --------------------------------------------------------------------

def _generator_point(A: OperatorSeries, y: tuple, rtol: float):
    n = A.n
    s = as_sequence(freeze(A, y).moment_sequence())
    borderline = False
    for i in range(n):
        e = tuple(2 if j == i else 0 for j in range(n))
        if s.N < 2:
            break
        tail = s.shift(e)
        k = 0
        while 2 * k <= tail.N:
            ev, verdict, _ = psd_verdict(moment_matrix(tail, k), rtol)
            borderline |= verdict == "borderline"
            if verdict == "fail":
                h, ev = _hankel_witness(tail, k, None, y, n)
                u = Polynomial.var(i, n)
                p = _shift_back(u * u * h * h, y)
                image = apply(A, p)
                fam = "tail" if n == 1 else f"tail{i + 1}"
                return Witness(y, fam, k, ev, p, image.eval(y), image), borderline
            k += 1
    return None, borderline


def check_generator(A, K: KSet, cfg: CheckConfig) -> PreserverVerdict:
    """Pointwise Levy-Khinchin necessary conditions for exp(tA) to preserve Pos(K).

    At each y the sequence (alpha! a_alpha(y)) restricted to |alpha| >= 2
    must be a moment sequence (of x_i^2 nu plus the Gaussian part). A failure
    gives p >= 0 with p(y) = 0 and (A p)(y) < 0, so exp(tA) p turns negative for
    small t. For K other than R^n a pass is a necessary condition only.
    """
    A = _as_operator(A)
    if not is_degree_preserving(A):
        raise ValueError("generator check needs a degree-preserving operator")
    if A.n != K.n:
        raise DimensionError("operator and K have different dimensions")
    cfg.validate(K)
    N = min(cfg.order, A.order)
    if N < A.order:
        A = OperatorSeries(A.n, N, {a: q for a, q in A.coeffs.items() if sum(a) <= N})
    results = pmap(lambda y: _generator_point(A, y, cfg.rtol), cfg.y_grid)
    borderline = any(b for _, b in results)
    for wit, _ in results:
        if wit is not None:
            return PreserverVerdict("fail", K.describe(), N, len(cfg.y_grid), wit, borderline)
    note = "no violation found on the grid up to the truncation order"
    if not K.translation_invariant:
        note = "necessary only: K is not translation invariant, so a pass does not certify the semigroup"
    return PreserverVerdict("pass-necessary", K.describe(), N, len(cfg.y_grid), None, borderline, note)


__all__ = [
    "KSet",
    "chebyshev_points",
    "CheckConfig",
    "Witness",
    "PreserverVerdict",
    "check_preserver",
    "check_diagonal_preserver",
    "resolvent_operator",
    "ResolventRow",
    "ResolventReport",
    "check_resolvent",
    "check_generator",
]
