"""Moment sequences: Hankel positivity tests, convolutions, atomic measures, atom recovery.

All truncated tests here check *necessary* conditions: a sequence that passes
up to order N is reported as "pass-necessary", never as a moment sequence.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from .cgroup import CAlgebraElement, ConstSeries
from .polyalg import (
    DimensionError,
    MultiIndex,
    Polynomial,
    Scalar,
    TruncationError,
    mi_add,
    mi_binom,
    mi_factorial,
    mi_sub,
    multi_indices,
    sub_indices,
    to_scalar,
)

#: Relative eigenvalue tolerance (times the matrix infinity norm).
PSD_RTOL = 1e-10


# -- sequences ---------------------------------------------------------------

class SequenceND:
    """Real sequence alpha -> s_alpha, total for |alpha| <= N."""

    __slots__ = ("n", "N", "values")

    def __init__(self, n: int, N: int, values: Mapping[MultiIndex, Scalar]):
        self.n = n
        self.N = N
        vals = {}
        for alpha in multi_indices(n, N):
            if alpha not in values:
                raise TruncationError(f"sequence undefined at {alpha}")
            vals[alpha] = to_scalar(values[alpha])
        self.values = vals

    def __getitem__(self, alpha):
        if isinstance(alpha, (int, np.integer)):
            alpha = (int(alpha),)
        return self.values[tuple(alpha)]

    def __eq__(self, other):
        if not isinstance(other, SequenceND):
            return NotImplemented
        return (self.n, self.N, self.values) == (other.n, other.N, other.values)

    def __repr__(self):
        if self.n == 1:
            return f"Sequence1D({self.as_list()!r})"
        return f"SequenceND(n={self.n}, N={self.N}, {self.values!r})"

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values.values())

    def truncate(self, N: int) -> "SequenceND":
        if N > self.N:
            raise TruncationError("cannot extend a truncated sequence")
        return _make(self.n, N, self.values)

    def as_list(self) -> list:
        if self.n != 1:
            raise DimensionError("as_list needs a univariate sequence")
        return [self.values[(k,)] for k in range(self.N + 1)]

    def shift(self, e: MultiIndex) -> "SequenceND":
        """(s_{alpha+e})_alpha, truncated to N - |e|."""
        return _make(self.n, self.N - sum(e), {a: self.values[mi_add(a, e)] for a in multi_indices(self.n, self.N - sum(e))})


class Sequence1D(SequenceND):
    """Univariate sequence s_0, ..., s_N."""

    __slots__ = ()

    def __init__(self, values: Iterable):
        values = list(values)
        super().__init__(1, len(values) - 1, {(k,): v for k, v in enumerate(values)})


def _make(n: int, N: int, values) -> SequenceND:
    if n == 1:
        return Sequence1D([values[(k,)] for k in range(N + 1)])
    return SequenceND(n, N, values)


def as_sequence(s) -> SequenceND:
    if isinstance(s, SequenceND):
        return s
    if isinstance(s, Mapping):
        n = len(next(iter(s)))
        N = max(sum(a) for a in s)
        return _make(n, N, s)
    return Sequence1D(s)


def riesz_apply(s, p: Polynomial):
    """L_s(p) = sum_alpha p_alpha s_alpha."""
    s = as_sequence(s)
    if p.n != s.n:
        raise DimensionError("dimension mismatch")
    if p.deg > s.N:
        raise TruncationError(f"deg p = {p.deg} exceeds truncation {s.N}")
    return sum((c * s.values[a] for a, c in p.terms.items()), Fraction(0))


# -- PSD machinery -------------------------------------------------------------

def _to_float_matrix(M) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in M], dtype=float)


def exact_psd(M) -> bool:
    """Exact PSD test of a symmetric rational matrix by pivoted LDL^T elimination."""
    A = [[Fraction(v) for v in row] for row in M]
    m = len(A)
    active = list(range(m))
    while active:
        # pick the largest remaining diagonal as pivot
        k = max(active, key=lambda i: A[i][i])
        piv = A[k][k]
        if piv < 0:
            return False
        if piv == 0:
            # all remaining diagonals are <= 0; PSD forces the remaining block to vanish
            return all(A[i][j] == 0 for i in active for j in active)
        active.remove(k)
        for i in active:
            f = A[i][k] / piv
            if f == 0:
                continue
            for j in active:
                A[i][j] -= f * A[k][j]
    return True


def psd_verdict(M, rtol: float = PSD_RTOL):
    """(smallest eigenvalue, verdict, exact) for a symmetric matrix.

    Eigenvalues within rtol * ||M||_inf of zero count as PSD with verdict
    "borderline". When every entry is rational and the float verdict is not a
    clear "psd", the exact LDL^T test settles the sign.
    """
    F = _to_float_matrix(M)
    if F.size == 0:
        return 0.0, "psd", False
    ev = float(np.linalg.eigvalsh(F)[0])
    tol = rtol * float(np.abs(F).sum(axis=1).max())
    if ev > tol:
        verdict = "psd"
    elif ev >= -tol:
        verdict = "borderline"
    else:
        verdict = "fail"
    exact = False
    if verdict != "psd" and all(isinstance(v, (Fraction, int)) for row in M for v in row):
        exact = True
        ok = exact_psd(M)
        if not ok:
            verdict = "fail"
        elif verdict == "fail":
            verdict = "borderline"
    return ev, verdict, exact


@dataclass
class OrderResult:
    order: int
    min_eigenvalue: float
    verdict: str
    family: str = "hankel"
    exact: bool = False

    def to_dict(self):
        return {
            "order": self.order,
            "family": self.family,
            "min_eigenvalue": self.min_eigenvalue,
            "verdict": self.verdict,
            "exact": self.exact,
        }


@dataclass
class HankelReport:
    """Per-order PSD verdicts; the overall verdict fails as soon as one order fails."""

    N: int
    rows: List[OrderResult] = field(default_factory=list)

    @property
    def failure(self) -> Optional[OrderResult]:
        for r in self.rows:
            if r.verdict == "fail":
                return r
        return None

    @property
    def passed(self) -> bool:
        return self.failure is None

    @property
    def verdict(self) -> str:
        return "pass-necessary" if self.passed else "fail"

    @property
    def borderline(self) -> bool:
        return any(r.verdict == "borderline" for r in self.rows)

    def to_dict(self):
        f = self.failure
        return {
            "verdict": self.verdict,
            "truncation": self.N,
            "borderline": self.borderline,
            "failure": None if f is None else f.to_dict(),
            "orders": [r.to_dict() for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order", "min_eigenvalue", "verdict"])
        for r in self.rows:
            order = r.order if r.family == "hankel" else f"{r.family}:{r.order}"
            w.writerow([order, f"{r.min_eigenvalue:.17g}", r.verdict])
        return buf.getvalue()


def hankel(s, i: int, exact: bool = False) -> np.ndarray:
    """(i+1)x(i+1) Hankel matrix (s_{j+l}); object dtype keeps Fractions when ``exact``."""
    vals = as_sequence(s).as_list()
    if 2 * i > len(vals) - 1:
        raise TruncationError(f"order {i} Hankel needs s_0..s_{2 * i}, have N = {len(vals) - 1}")
    rows = [[vals[j + l] for l in range(i + 1)] for j in range(i + 1)]
    if exact:
        return np.array(rows, dtype=object)
    return _to_float_matrix(rows)


def moment_matrix(s: SequenceND, i: int, loc: Polynomial | None = None):
    """Moment (or localizing) matrix (L_s(g x^{a+b}))_{|a|,|b| <= i} as nested lists."""
    basis = multi_indices(s.n, i)
    g = loc if loc is not None else Polynomial.const(1, s.n)
    rows = []
    for a in basis:
        row = []
        for b in basis:
            ab = mi_add(a, b)
            row.append(sum((c * s.values[mi_add(ab, e)] for e, c in g.terms.items()), Fraction(0)))
        rows.append(row)
    return rows


def _psd_sweep(s: SequenceND, loc: Polynomial | None, family: str, rtol: float) -> List[OrderResult]:
    extra = 0 if loc is None else int(loc.deg)
    rows = []
    i = 0
    while 2 * i + extra <= s.N:
        M = moment_matrix(s, i, loc)
        ev, verdict, exact = psd_verdict(M, rtol)
        rows.append(OrderResult(i, ev, verdict, family, exact))
        i += 1
    return rows


def hamburger_check(s, rtol: float = PSD_RTOL) -> HankelReport:
    """PSD of H_0..H_{N//2} (moment matrices when n >= 2): necessary for an R^n-moment sequence."""
    s = as_sequence(s)
    return HankelReport(s.N, _psd_sweep(s, None, "hankel", rtol))


def stieltjes_check(s, lower=0, rtol: float = PSD_RTOL) -> HankelReport:
    """Hankel PSD plus shifted Hankel (s_{k+1} - lower*s_k): necessary for support in [lower, oo).

    For n >= 2 ``lower`` is a point and every coordinate gets its own localizer
    x_i - lower_i (support in the shifted orthant).
    """
    s = as_sequence(s)
    rows = _psd_sweep(s, None, "hankel", rtol)
    lows = _as_tuple(lower, s.n)
    for i in range(s.n):
        g = Polynomial.var(i, s.n) - lows[i]
        fam = "shifted" if s.n == 1 else f"shifted{i + 1}"
        rows.extend(_psd_sweep(s, g, fam, rtol))
    return HankelReport(s.N, rows)


def _as_tuple(v, n: int) -> tuple:
    if isinstance(v, (int, float, Fraction)) or np.ndim(v) == 0:
        return (to_scalar(v),) * n
    v = tuple(to_scalar(c) for c in v)
    if len(v) != n:
        raise DimensionError("bound dimension mismatch")
    return v


@dataclass
class HausdorffReport:
    """L_s(prod (x_i - a_i)^{m_i} (b_i - x_i)^{p_i}) for all |m| + |p| <= N."""

    N: int
    differences: Dict[tuple, Scalar]
    witness: Optional[tuple]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def verdict(self) -> str:
        return "pass-necessary" if self.passed else "fail"

    def to_dict(self):
        items = sorted(self.differences.items(), key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), kv[0]))
        return {
            "verdict": self.verdict,
            "truncation": self.N,
            "witness": None if self.witness is None else {"m": list(self.witness[0]), "p": list(self.witness[1])},
            "differences": [
                {"m": list(m), "p": list(p), "value": v} for (m, p), v in items
            ],
        }


def hausdorff_check(s, a=0, b=1, rtol: float = PSD_RTOL) -> HausdorffReport:
    """Signed differences on the box prod [a_i, b_i]; all must be >= 0.

    For univariate s on [0, 1] these are sum_j binom(p, j) (-1)^j s_{m+j}.
    Exact rationals are compared with zero exactly, floats against
    rtol * max|s|.
    """
    s = as_sequence(s)
    n = s.n
    lo, hi = _as_tuple(a, n), _as_tuple(b, n)
    exact = s.is_exact() and all(isinstance(v, Fraction) for v in lo + hi)
    scale = max((abs(float(v)) for v in s.values.values()), default=0.0)
    tol = 0.0 if exact else rtol * max(scale, 1.0)
    left = [Polynomial.var(i, n) - lo[i] for i in range(n)]
    right = [hi[i] - Polynomial.var(i, n) for i in range(n)]
    diffs = {}
    witness = None
    for mp in multi_indices(2 * n, s.N):
        m, p = mp[:n], mp[n:]
        g = Polynomial.const(1, n)
        for i in range(n):
            g = g * left[i] ** m[i] * right[i] ** p[i]
        v = riesz_apply(s, g)
        diffs[(m, p)] = v
        if witness is None and v < -tol:
            witness = (m, p)
    return HausdorffReport(s.N, diffs, witness, tol)


# -- sequence products ---------------------------------------------------------

def convolve(s, t) -> SequenceND:
    """(s*t)_alpha = sum_{beta <= alpha} binom(alpha, beta) s_beta t_{alpha-beta}."""
    s, t = as_sequence(s), as_sequence(t)
    if s.n != t.n:
        raise DimensionError("dimension mismatch")
    N = min(s.N, t.N)
    out = {}
    for alpha in multi_indices(s.n, N):
        out[alpha] = sum(
            (mi_binom(alpha, beta) * s.values[beta] * t.values[mi_sub(alpha, beta)] for beta in sub_indices(alpha)),
            Fraction(0),
        )
    return _make(s.n, N, out)


def hadamard(s, t) -> SequenceND:
    """Entrywise product (s_alpha t_alpha)."""
    s, t = as_sequence(s), as_sequence(t)
    if s.n != t.n:
        raise DimensionError("dimension mismatch")
    N = min(s.N, t.N)
    return _make(s.n, N, {a: s.values[a] * t.values[a] for a in multi_indices(s.n, N)})


# -- atomic measures -------------------------------------------------------------

def _point(p) -> tuple:
    if isinstance(p, (int, float, Fraction, Rational)) or np.ndim(p) == 0:
        return (to_scalar(p),)
    return tuple(to_scalar(v) for v in p)


@dataclass
class AtomicMeasure:
    """Finitely many points with strictly positive weights; coincident points are merged."""

    atoms: List[tuple]

    def __init__(self, atoms: Iterable = ()):
        merged: Dict[tuple, Scalar] = {}
        order = []
        for pt, w in atoms:
            pt = _point(pt)
            w = to_scalar(w)
            if w <= 0:
                raise ValueError(f"weights must be positive, got {w}")
            if pt not in merged:
                order.append(pt)
                merged[pt] = w
            else:
                merged[pt] = merged[pt] + w
        dims = {len(p) for p in order}
        if len(dims) > 1:
            raise DimensionError("atoms of different dimensions")
        self.atoms = [(p, merged[p]) for p in order]

    @classmethod
    def dirac(cls, point, weight=1) -> "AtomicMeasure":
        return cls([(point, weight)])

    @property
    def n(self) -> int:
        return len(self.atoms[0][0]) if self.atoms else 1

    @property
    def points(self) -> list:
        return [p for p, _ in self.atoms]

    @property
    def weights(self) -> list:
        return [w for _, w in self.atoms]

    @property
    def mass(self):
        return sum(self.weights, Fraction(0))

    def __len__(self):
        return len(self.atoms)

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for p, w in self.atoms for v in p + (w,))

    def sorted(self) -> "AtomicMeasure":
        return AtomicMeasure(sorted(self.atoms, key=lambda a: tuple(float(v) for v in a[0])))

    def scaled(self, c) -> "AtomicMeasure":
        return AtomicMeasure([(p, w * to_scalar(c)) for p, w in self.atoms])

    def pushforward(self, f) -> "AtomicMeasure":
        return AtomicMeasure([(f(p), w) for p, w in self.atoms])

    def __eq__(self, other):
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return dict(self.atoms) == dict(other.atoms)

    def to_dict(self):
        return {"atoms": [{"point": list(p), "weight": w} for p, w in self.atoms]}


def atomic_moments(mu: AtomicMeasure, N: int, n: int | None = None) -> SequenceND:
    """s_alpha = sum_i c_i x_i^alpha for |alpha| <= N (exact for rational atoms)."""
    n = n or mu.n
    out = {}
    for alpha in multi_indices(n, N):
        acc = Fraction(0)
        for p, w in mu.atoms:
            term = w
            for xi, a in zip(p, alpha):
                term = term * xi**a
            acc = acc + term
        out[alpha] = acc
    return _make(n, N, out)


def additive_convolve(mu: AtomicMeasure, nu: AtomicMeasure) -> AtomicMeasure:
    """Image of mu x nu under (x, y) -> x + y."""
    if mu.atoms and nu.atoms and mu.n != nu.n:
        raise DimensionError("dimension mismatch")
    return AtomicMeasure(
        [(tuple(a + b for a, b in zip(p, q)), w * v) for p, w in mu.atoms for q, v in nu.atoms]
    )


def multiplicative_convolve(mu: AtomicMeasure, nu: AtomicMeasure) -> AtomicMeasure:
    """Image of mu x nu under the componentwise product; its moments are the Hadamard product."""
    if mu.atoms and nu.atoms and mu.n != nu.n:
        raise DimensionError("dimension mismatch")
    return AtomicMeasure(
        [(tuple(a * b for a, b in zip(p, q)), w * v) for p, w in mu.atoms for q, v in nu.atoms]
    )


# -- atom recovery ------------------------------------------------------------

class FewerAtoms(ValueError):
    """The Hankel matrix is singular: ``k`` atoms suffice."""

    def __init__(self, k: int):
        super().__init__(f"Hankel matrix is singular; {k} atom(s) suffice")
        self.k = k


def _exact_solve(A, b):
    """Gauss-Jordan over Fractions; returns None when singular."""
    m = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
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
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[col])]
    return [M[r][m] for r in range(m)]


def _exact_rank(A) -> int:
    M = [[Fraction(v) for v in row] for row in A]
    rank = 0
    rows, cols = len(M), len(M[0]) if M else 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, rows):
            f = M[r][col] / M[rank][col]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def _horner(c, x):
    acc = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _refine_root(coeffs, lo, hi, exact: bool, tol: float = 1e-13) -> float:
    """Safeguarded Newton inside a sign-change bracket [lo, hi]."""
    fc = [float(v) for v in coeffs]
    dc = [k * fc[k] for k in range(1, len(fc))]

    def sign(x):
        v = _horner(coeffs, Fraction(x)) if exact else _horner(fc, x)
        return (v > 0) - (v < 0)

    slo, shi = sign(lo), sign(hi)
    if slo == 0:
        return lo
    if shi == 0:
        return hi
    x = 0.5 * (lo + hi)
    for _ in range(200):
        sx = sign(x)
        if sx == 0:
            return x
        if sx == slo:
            lo = x
        else:
            hi = x
        if hi - lo <= tol * max(1.0, abs(x)):
            break
        d = _horner(dc, x)
        step = x - _horner(fc, x) / d if d != 0 else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    return 0.5 * (lo + hi) if sign(x) != 0 else x


def _snap(x: float, coeffs) -> Optional[Fraction]:
    for den in (10**3, 10**6, 10**9):
        r = Fraction(x).limit_denominator(den)
        if _horner(coeffs, r) == 0:
            return r
    return None


def recover_atoms(s, k: int) -> AtomicMeasure:
    """k atoms and weights reproducing s_0..s_{2k-1} (Prony / orthogonal polynomial route).

    Solves the Hankel system for the monic degree-k orthogonal polynomial,
    takes its roots from the companion matrix, and polishes them by bisection
    plus Newton. Rational input whose roots are rational yields exact atoms.
    """
    vals = as_sequence(s).as_list()
    if len(vals) < 2 * k:
        raise TruncationError(f"need s_0..s_{2 * k - 1}")
    if k < 1:
        raise ValueError("k must be positive")
    exact = all(isinstance(v, Fraction) for v in vals[: 2 * k])
    H = [[vals[i + j] for j in range(k)] for i in range(k)]
    rhs = [-vals[k + i] for i in range(k)]
    if exact:
        r = _exact_rank(H)
        if r < k:
            raise FewerAtoms(r)
        c = _exact_solve(H, rhs)
        if not exact_psd(H):
            raise ValueError("Hankel matrix is not positive definite")
    else:
        Hf = _to_float_matrix(H)
        ev = np.linalg.eigvalsh(Hf)
        if ev[0] <= 1e-12 * abs(ev[-1]):
            if ev[0] < -1e-12 * abs(ev[-1]):
                raise ValueError("Hankel matrix is not positive definite")
            raise FewerAtoms(int(np.sum(ev > 1e-12 * abs(ev[-1]))))
        c = list(np.linalg.solve(Hf, np.array(rhs, dtype=float)))
    poly = list(c) + [Fraction(1) if exact else 1.0]  # ascending, monic
    raw = np.roots([float(v) for v in reversed(poly)])
    guesses = np.sort(raw.real)
    # brackets between consecutive guesses; roots are real and simple
    span = 1.0 + float(np.max(np.abs(guesses)))
    cuts = [guesses[0] - span] + [0.5 * (guesses[j] + guesses[j + 1]) for j in range(k - 1)] + [guesses[-1] + span]
    roots = []
    for j in range(k):
        x = _refine_root(poly, float(cuts[j]), float(cuts[j + 1]), exact)
        if exact:
            snapped = _snap(x, poly)
            roots.append(snapped if snapped is not None else x)
        else:
            roots.append(x)
    if exact and all(isinstance(r, Fraction) for r in roots):
        V = [[r**i for r in roots] for i in range(k)]
        w = _exact_solve(V, vals[:k])
    else:
        V = np.array([[float(r) ** i for r in roots] for i in range(2 * k)])
        w = np.linalg.lstsq(V, np.array([float(v) for v in vals[: 2 * k]]), rcond=None)[0]
        w = [float(v) for v in w]
    return AtomicMeasure([(r, wi) for r, wi in zip(roots, w)])


# -- Levy triplets ---------------------------------------------------------------

@dataclass
class LevyTriplet:
    """Drift b, covariance Sigma (PSD), atomic Levy measure nu without an atom at 0."""

    b: Sequence
    Sigma: Sequence
    nu: AtomicMeasure

    def __post_init__(self):
        self.b = tuple(to_scalar(v) for v in self.b)
        n = len(self.b)
        self.Sigma = tuple(tuple(to_scalar(v) for v in row) for row in self.Sigma)
        if len(self.Sigma) != n or any(len(r) != n for r in self.Sigma):
            raise DimensionError("Sigma must be n x n")
        for i in range(n):
            for j in range(n):
                if self.Sigma[i][j] != self.Sigma[j][i]:
                    raise ValueError("Sigma must be symmetric")
        _, verdict, _ = psd_verdict(self.Sigma) if n else (0, "psd", False)
        if verdict == "fail":
            raise ValueError("Sigma is not positive semidefinite")
        if self.nu.atoms and self.nu.n != n:
            raise DimensionError("nu has wrong dimension")
        if any(all(v == 0 for v in p) for p in self.nu.points):
            raise ValueError("the Levy measure must not charge the origin")

    @property
    def n(self) -> int:
        return len(self.b)


def levy_generator(tr: LevyTriplet, d: int) -> CAlgebraElement:
    """A = sum a_alpha/alpha! d^alpha with the Levy-Khinchin moment formulas.

    a_{e_i} = b_i + int_{|x|>=1} x_i dnu, a_{e_i+e_j} = sigma_ij + int x^{e_i+e_j} dnu,
    a_alpha = int x^alpha dnu for |alpha| >= 3.
    """
    n = tr.n
    coeffs = {}
    for alpha in multi_indices(n, d):
        k = sum(alpha)
        if k == 0:
            continue
        if k == 1:
            i = alpha.index(1)
            val = tr.b[i] + sum(
                (w * p[i] for p, w in tr.nu.atoms if sum(v * v for v in p) >= 1), Fraction(0)
            )
        else:
            val = _nu_moment(tr.nu, alpha)
            if k == 2:
                idx = [i for i, a in enumerate(alpha) for _ in range(a)]
                val = val + tr.Sigma[idx[0]][idx[1]]
        coeffs[alpha] = val / mi_factorial(alpha) if not isinstance(val, Fraction) else val / Fraction(mi_factorial(alpha))
    return CAlgebraElement(n, d, coeffs)


def _nu_moment(nu: AtomicMeasure, alpha) -> Scalar:
    acc = Fraction(0)
    for p, w in nu.atoms:
        term = w
        for xi, a in zip(p, alpha):
            term = term * xi**a
        acc = acc + term
    return acc


def generator_tail(A: ConstSeries) -> Sequence1D:
    """(a_{k+2})_{k>=0} with a_k = k! * A[k]: must be a moment sequence for a generator."""
    if A.n != 1:
        raise DimensionError("univariate generators only")
    return Sequence1D([math.factorial(k) * A[(k,)] for k in range(2, A.order + 1)])


def generator_check_1d(A: ConstSeries, rtol: float = PSD_RTOL) -> HankelReport:
    """Necessary condition for exp(tA) to preserve positivity: Hankel PSD of the tail sequence."""
    if A.order < 2:
        return HankelReport(A.order - 2, [])
    return hamburger_check(generator_tail(A), rtol)


__all__ = [
    "PSD_RTOL",
    "SequenceND",
    "Sequence1D",
    "as_sequence",
    "riesz_apply",
    "exact_psd",
    "psd_verdict",
    "OrderResult",
    "HankelReport",
    "HausdorffReport",
    "hankel",
    "moment_matrix",
    "hamburger_check",
    "stieltjes_check",
    "hausdorff_check",
    "convolve",
    "hadamard",
    "AtomicMeasure",
    "atomic_moments",
    "additive_convolve",
    "multiplicative_convolve",
    "FewerAtoms",
    "recover_atoms",
    "LevyTriplet",
    "levy_generator",
    "generator_tail",
    "generator_check_1d",
]
