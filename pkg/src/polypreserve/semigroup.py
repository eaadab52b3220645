"""Invariant-subspace chains, matrix exponentials, evolution, and eventual-positivity thresholds."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

import mpmath
import numpy as np

from . import _kernels
from .opcore import OperatorSeries, apply
from .polyalg import MultiIndex, Polynomial, TruncationError, grlex_key, to_scalar

Action = Callable[[Polynomial], Polynomial]


def _as_action(A) -> Action:
    if isinstance(A, OperatorSeries):
        return lambda p: apply(A, p, finite=True)
    if hasattr(A, "apply") and not callable(A):
        return A.apply
    if callable(A):
        return A
    raise TypeError("operator must be an OperatorSeries or a callable on polynomials")


# -- exact span bookkeeping ----------------------------------------------------

class _Span:
    """Row-reduced basis of a subspace of polynomials (exact)."""

    def __init__(self):
        self.rows: List[tuple] = []  # (pivot monomial, reduced polynomial terms)

    def reduce(self, p: Polynomial) -> dict:
        terms = dict(p.terms)
        for pivot, row in self.rows:
            c = terms.get(pivot)
            if c:
                for a, v in row.items():
                    terms[a] = terms.get(a, 0) - c * v
                    if terms[a] == 0:
                        del terms[a]
        return terms

    def add(self, p: Polynomial) -> bool:
        """Insert p; False when it already lies in the span."""
        terms = self.reduce(p)
        if not terms:
            return False
        pivot = max(terms, key=grlex_key)
        c = terms[pivot]
        row = {a: v / c for a, v in terms.items()}
        # keep rows fully reduced so reduce() works in one pass
        new_rows = []
        for pv, r in self.rows:
            f = r.get(pivot)
            if f:
                r = dict(r)
                for a, v in row.items():
                    r[a] = r.get(a, 0) - f * v
                    if r[a] == 0:
                        del r[a]
            new_rows.append((pv, r))
        new_rows.append((pivot, row))
        self.rows = new_rows
        return True

    def contains(self, p: Polynomial) -> bool:
        return not self.reduce(p)

    def __len__(self):
        return len(self.rows)


# -- membership chains -----------------------------------------------------------

@dataclass
class InvariantChain:
    """Krylov chain p, Ap, A^2 p, ... until A^k p falls in the span of its predecessors."""

    start: Polynomial
    basis: List[Polynomial]
    index: int
    cap: int
    verified: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def max_degree(self) -> int:
        return int(max(b.deg for b in self.basis)) if self.basis else 0

    def __bool__(self):
        return True

    def to_dict(self):
        return {
            "member": True,
            "start": self.start,
            "basis": self.basis,
            "stabilization_index": self.index,
            "dimension": self.dimension,
            "cap": self.cap,
            "verified": self.verified,
        }


@dataclass
class MembershipRefusal:
    """The chain outgrew the degree cap: membership is unknown, not refuted."""

    start: Polynomial
    power: int
    degree: int
    cap: int

    def __bool__(self):
        return False

    @property
    def message(self) -> str:
        return f"unknown beyond cap: deg A^{self.power} p = {self.degree} exceeds {self.cap}"

    def to_dict(self):
        return {"member": None, "start": self.start, "power": self.power,
                "degree": self.degree, "cap": self.cap, "message": self.message}


def default_cap(p: Polynomial) -> int:
    return 4 * (max(p.deg, 0) + 1) + 16


def fd_membership(A, start, D_max: int | None = None, n: int = 1) -> Union[InvariantChain, MembershipRefusal]:
    """Build V_{i+1} = V_i + A V_i from V_0 = span{start} until it stabilizes or passes D_max.

    ``start`` is a polynomial or a multi-index (meaning x^alpha).
    """
    act = _as_action(A)
    if not isinstance(start, Polynomial):
        alpha = (start,) if isinstance(start, int) else tuple(start)
        start = Polynomial.monomial(alpha)
    cap = default_cap(start) if D_max is None else D_max
    span = _Span()
    basis: List[Polynomial] = []
    if start.is_zero():
        return InvariantChain(start, [], 0, cap, True)
    span.add(start)
    basis.append(start)
    current = start
    power = 0
    while True:
        power += 1
        img = act(current)
        if not isinstance(img, Polynomial):
            img = Polynomial.const(img, start.n)
        if not img.is_zero() and img.deg > cap:
            return MembershipRefusal(start, power, int(img.deg), cap)
        if not span.add(img):
            break
        basis.append(img)
        current = img
    verified = all(span.contains(act(b)) for b in basis)
    return InvariantChain(start, basis, power - 1, cap, verified)


# -- worked example operators (univariate black boxes) ------------------------------

def _monomialwise(rule: Callable[[int], Polynomial]) -> Action:
    def act(p: Polynomial) -> Polynomial:
        out = Polynomial.zero(1)
        for (k,), c in p.terms.items():
            out = out + rule(k).scale(c)
        return out

    return act


def even_odd_shifts():
    """(A, B): A fixes even powers and raises odd ones, B does the opposite."""
    xk = lambda k: Polynomial.monomial((k,))
    A = _monomialwise(lambda k: xk(k) if k % 2 == 0 else xk(k + 1))
    B = _monomialwise(lambda k: xk(k + 1) if k % 2 == 0 else xk(k))
    return A, B


def op_sum(A: Action, B: Action) -> Action:
    return lambda p: A(p) + B(p)


def op_product(A: Action, B: Action) -> Action:
    """p -> A(B(p))."""
    return lambda p: A(B(p))


def op_bracket(A: Action, B: Action) -> Action:
    return lambda p: A(B(p)) - B(A(p))


def _primes(count: int) -> list:
    out = []
    k = 2
    while len(out) < count:
        if all(k % q for q in out if q * q <= k):
            out.append(k)
        k += 1
    return out


def prime_target_operator() -> Action:
    """x^{2m} -> x^{p_{m+1}} for m >= 1 (p_j the j-th prime), every other monomial -> 0; squares to 0."""

    def rule(k: int) -> Polynomial:
        if k >= 2 and k % 2 == 0:
            return Polynomial.monomial((_primes(k // 2 + 1)[-1],))
        return Polynomial.zero(1)

    return _monomialwise(rule)


# -- matrices and exponentials ------------------------------------------------------

@dataclass
class MatrixOperator:
    """Square matrix acting on coordinates with respect to an ordered polynomial basis."""

    matrix: list
    basis: Optional[List[Polynomial]] = None

    @property
    def size(self) -> int:
        return len(self.matrix)

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for row in self.matrix for v in row)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.matrix], dtype=float)

    @classmethod
    def from_chain(cls, A, chain: InvariantChain) -> "MatrixOperator":
        """Matrix of A on the chain basis (column j = coordinates of A b_j)."""
        act = _as_action(A)
        k = chain.dimension
        cols = []
        for j, b in enumerate(chain.basis):
            if j + 1 < k:
                cols.append([Fraction(int(i == j + 1)) for i in range(k)])
            else:
                cols.append(_coordinates(act(b), chain.basis))
        return cls([[cols[j][i] for j in range(k)] for i in range(k)], list(chain.basis))

    @classmethod
    def on_monomials(cls, A, d: int) -> "MatrixOperator":
        """Matrix of an OperatorSeries on 1, x, ..., (graded-lex monomials up to d)."""
        M, basis = A.matrix(d)
        return cls(M, [Polynomial.monomial(b) for b in basis])

    def apply_coords(self, v):
        return [sum(self.matrix[i][j] * v[j] for j in range(self.size)) for i in range(self.size)]


def _coordinates(p: Polynomial, basis: List[Polynomial]) -> list:
    """Coordinates of p in a linearly independent basis; exact for rational input."""
    monos = sorted({a for b in basis for a in b.terms} | set(p.terms), key=grlex_key)
    k = len(basis)
    if not (p.is_exact() and all(b.is_exact() for b in basis)):
        V = np.array([[float(b.coeff(m)) for b in basis] for m in monos])
        rhs = np.array([float(p.coeff(m)) for m in monos])
        x, *_ = np.linalg.lstsq(V, rhs, rcond=None)
        if np.abs(V @ x - rhs).max() > 1e-9 * max(1.0, np.abs(rhs).max()):
            raise ValueError("polynomial is not in the span of the basis")
        return x.tolist()
    M = [[b.coeff(m) for b in basis] + [p.coeff(m)] for m in monos]
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            raise ValueError("basis is linearly dependent")
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][col]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    if any(M[i][k] != 0 for i in range(r, len(M))):
        raise ValueError("polynomial is not in the span of the basis")
    return [M[i][k] for i in range(k)]


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def _nilpotent_part(M):
    """(c, N) with M = c I + N and N nilpotent, exactly; None otherwise."""
    n = len(M)
    c = M[0][0]
    N = [[M[i][j] - (c if i == j else 0) for j in range(n)] for i in range(n)]
    P = N
    for _ in range(n):
        if all(v == 0 for row in P for v in row):
            return c, N
        P = _matmul(P, N)
    return None


def matrix_exp(M, t=1) -> MatrixOperator:
    """exp(t M).

    If M = cI + N with N nilpotent (checked exactly for rational M), the finite
    series is summed exactly and scaled by e^{ct}; otherwise a scaling-and-
    squaring Taylor evaluation in floats (relative error around 1e-15 for
    moderate norms).
    """
    basis = M.basis if isinstance(M, MatrixOperator) else None
    mat = M.matrix if isinstance(M, MatrixOperator) else [list(r) for r in np.asarray(M, dtype=object)]
    n = len(mat)
    if n == 0:
        return MatrixOperator([], basis)
    exact_input = all(isinstance(v, (Fraction, int)) for row in mat for v in row)
    if exact_input:
        mat = [[Fraction(v) for v in row] for row in mat]
        split = _nilpotent_part(mat)
        if split is not None:
            c, N = split
            tt = to_scalar(t)
            S = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
            term = S
            for k in range(1, n + 1):
                term = [[v * tt / k for v in row] for row in _matmul(term, N)]
                if all(v == 0 for row in term for v in row):
                    break
                S = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(S, term)]
            if c == 0:
                return MatrixOperator(S, basis)
            scale = math.exp(float(c) * float(tt))
            return MatrixOperator([[float(v) * scale for v in row] for row in S], basis)
    A = np.array([[float(v) for v in row] for row in mat], dtype=float) * float(t)
    return MatrixOperator(_expm_float(A).tolist(), basis)


def _expm_float(A: np.ndarray) -> np.ndarray:
    norm = float(np.abs(A).sum(axis=1).max()) if A.size else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0)
    B = A / (2.0**s)
    n = A.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, 30):
        term = term @ B / k
        out = out + term
        if np.abs(term).max() <= 1e-18 * np.abs(out).max():
            break
    for _ in range(s):
        out = out @ out
    return out


def evolve(A, p0: Polynomial, t, D_max: int | None = None) -> Polynomial:
    """exp(tA) p0 through the stabilized chain of p0.

    Exact when A is nilpotent on the chain and t is rational.
    """
    chain = fd_membership(A, p0, D_max)
    if not chain:
        raise TruncationError(chain.message)
    if chain.dimension == 0:
        return Polynomial.zero(p0.n)
    M = MatrixOperator.from_chain(A, chain)
    E = matrix_exp(M, t)
    coords = [row[0] for row in E.matrix]  # p0 is the first basis vector
    out = Polynomial.zero(p0.n)
    for c, b in zip(coords, chain.basis):
        out = out + b.scale(c)
    return out


# -- eventual positivity -----------------------------------------------------------

@dataclass
class EventualReport:
    model: str
    param: dict
    samples: List[tuple] = field(default_factory=list)
    bracket: Optional[tuple] = None
    classification: str = "never"
    note: str = ""

    def to_dict(self):
        return {
            "model": self.model,
            "param": self.param,
            "lo": None if self.bracket is None else self.bracket[0],
            "hi": None if self.bracket is None else self.bracket[1],
            "classification": self.classification,
            "note": self.note,
        }

    def to_csv(self) -> str:
        return curve_csv(self.samples)


def curve_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "criterion"])
    for t, v in samples:
        w.writerow([f"{t:.17g}", f"{v:.17g}"])
    return buf.getvalue()


def bisect_sign_change(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200):
    """Shrink [lo, hi] with f(lo) < 0 < f(hi) to width <= tol; returns the bracket."""
    flo, fhi = f(lo), f(hi)
    if not (flo < 0 < fhi):
        raise ValueError(f"no sign change: f({lo}) = {flo}, f({hi}) = {fhi}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm < 0:
            lo = mid
        elif fm > 0:
            hi = mid
        else:
            # exact zero: keep the invariant with an adjacent float
            lo = np.nextafter(mid, -np.inf)
            hi = mid if f(mid) > 0 else np.nextafter(mid, np.inf)
            break
    return lo, hi


def _first_up_crossing(ts, vals):
    for j in range(len(ts) - 1):
        if vals[j] < 0 < vals[j + 1]:
            return j
    return None


def _classify(vals, crossing) -> str:
    if all(v >= 0 for v in vals):
        return "always"
    if crossing is None:
        return "never"
    return "eventually"


def cube_weights(k: int, t: float) -> float:
    return math.exp(t * k**3)


def diag_hankel(t: float, d: int = 4, weight: Callable[[int, float], float] = cube_weights, i: int | None = None) -> np.ndarray:
    """Hankel matrix H_i of the diagonal sequence (weight(k, t))_{k <= d}."""
    i = d // 2 if i is None else i
    lam = [weight(k, t) for k in range(2 * i + 1)]
    return np.array([[lam[j + l] for l in range(i + 1)] for j in range(i + 1)])


def _mp_min_eig(t: float, d: int, i: int, power: int, dps: int = 40) -> float:
    with mpmath.workdps(dps):
        tt = mpmath.mpf(t)
        lam = [mpmath.exp(tt * k**power) for k in range(2 * i + 1)]
        H = mpmath.matrix([[lam[j + l] for l in range(i + 1)] for j in range(i + 1)])
        ev = mpmath.eigsy(H, eigvals_only=True)
        return float(min(ev))


def diag_sigma(t: float, d: int = 4, i: int | None = None, power: int = 3) -> float:
    """Smallest eigenvalue of H_i(e^{t k^power}) at 40 digits (default i = d // 2)."""
    return _mp_min_eig(t, d, d // 2 if i is None else i, power)


def diag_criterion(t: float, d: int = 4, weight: Callable[[int, float], float] = cube_weights,
                   power: int | None = 3) -> float:
    """Smallest eigenvalue over all Hankel orders i <= d/2 of the diagonal sequence.

    Near-singular values (|sigma| < 1e-6 ||H||) are recomputed with 40-digit
    arithmetic when the weights are e^{t k^power}.
    """
    best = math.inf
    for i in range(d // 2 + 1):
        H = diag_hankel(t, d, weight, i)
        sig = float(np.linalg.eigvalsh(H)[0])
        if power is not None and abs(sig) < 1e-6 * np.abs(H).sum(axis=1).max():
            sig = _mp_min_eig(t, d, i, power)
        best = min(best, sig)
    return best


def diag_curve(ts, d: int = 4) -> np.ndarray:
    """Batched smallest eigenvalue of H_{d/2}(e^{t k^3}) over a t grid (numba or numpy kernel)."""
    ts = np.asarray(ts, dtype=float)
    i = d // 2
    k = np.arange(2 * i + 1)
    lam = np.exp(np.outer(ts, k**3))
    idx = np.add.outer(np.arange(i + 1), np.arange(i + 1))
    mats = lam[:, idx]
    return _kernels.min_eig_batch(mats)


def eventual_diag(d: int = 4, t_range=(0.0, 0.015), steps: int = 300, tol: float = 1e-10,
                  weight: Callable[[int, float], float] = cube_weights, power: int | None = 3) -> EventualReport:
    """Sign change of the criterion for T_t x^k = weight(k, t) x^k on R[x]_{<=d}."""
    t0, t1 = float(t_range[0]), float(t_range[1])
    ts = np.linspace(t0, t1, steps + 1)
    if ts[0] <= 0:
        ts = ts[1:]  # t = 0 is exactly singular
    f = lambda t: diag_criterion(t, d, weight, power)
    vals = [f(float(t)) for t in ts]
    j = _first_up_crossing(ts, vals)
    rep = EventualReport("diag", {"d": d}, list(zip(ts.tolist(), vals)))
    rep.classification = _classify(vals, j)
    if j is not None:
        rep.bracket = bisect_sign_change(f, float(ts[j]), float(ts[j + 1]), tol)
        if any(v < 0 for v in vals[j + 1:]):
            rep.note = "criterion turns negative again inside the sampled range"
    return rep


def quadratic_operator(a) -> OperatorSeries:
    """A = a d + (x^2 - 1)/2 d^2 on R[x]_{<=2}."""
    x = Polynomial.var(0)
    return OperatorSeries(1, 2, {(1,): Polynomial.const(a), (2,): (x * x - 1).scale(Fraction(1, 2))})


def quadratic_delta(a, a_squared=None) -> float:
    """a^2 - 1/5, formed exactly from the binary value of a (or from an exact a_squared)."""
    a2 = Fraction(a_squared) if a_squared is not None else Fraction(a) ** 2
    return float(a2 - Fraction(1, 5))


def quadratic_min(a, t, a_squared=None) -> np.ndarray:
    """m(a, t): minimum over x of the determinant criterion for exp(tA), t > 0."""
    return _kernels.quadratic_min(quadratic_delta(a, a_squared), t)


def quadratic_min_direct(a, t) -> float:
    """The closed formula evaluated literally (reference, cancels badly for small t)."""
    e = math.exp(t)
    return 1 - e + a * a * (5 + 8 * t + 4 * t * t - (10 + 8 * t + t * t) * e + 5 * e * e) / (e - 1)


def quadratic_boundary(t) -> np.ndarray:
    """m(+-1/sqrt 5, t) = (4e^{-t} t (t+2) - t (t+8)) / (5 - 5e^{-t})."""
    t = np.asarray(t, dtype=float)
    return (4 * np.exp(-t) * t * (t + 2) - t * (t + 8)) / (-5 * np.expm1(-t))


def eventual_quadratic(a, t_range=(1e-6, 100.0), steps: int = 2000, tol: float = 1e-10,
                       a_squared=None) -> EventualReport:
    """Threshold tau_a where m(a, t) turns positive; classification by a^2 against 1/5."""
    delta = quadratic_delta(a, a_squared)
    a2 = Fraction(a_squared) if a_squared is not None else Fraction(a) ** 2
    t0, t1 = float(t_range[0]), float(t_range[1])
    if t0 <= 0:
        t0 = min(1e-6, t1 / 10)
    ts = np.geomspace(t0, t1, steps + 1)
    vals = _kernels.quadratic_min(delta, ts)
    rep = EventualReport("quadratic", {"a": float(a)}, list(zip(ts.tolist(), vals.tolist())))
    theory = "eventually" if a2 > Fraction(1, 5) else "never"
    j = _first_up_crossing(ts, vals)
    f = lambda t: float(_kernels.quadratic_min(delta, t)[0])
    if j is not None:
        rep.bracket = bisect_sign_change(f, float(ts[j]), float(ts[j + 1]), tol)
    rep.classification = theory
    if theory == "eventually" and j is None:
        rep.note = "no sign change inside the sampled range; widen t_range"
    elif theory == "never" and j is not None:
        rep.note = "sampled sign change contradicts a^2 <= 1/5"
    return rep


# -- exact exponential sums (for the Hankel determinant identities) -------------------

class ExpSum:
    """Finite sum sum_r c_r e^{r t} with rational r and c."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for r, c in (terms or {}).items():
            r, c = Fraction(r), Fraction(c)
            if c:
                clean[r] = clean.get(r, 0) + c
                if clean[r] == 0:
                    del clean[r]
        self.terms = clean

    @classmethod
    def exp(cls, r) -> "ExpSum":
        return cls({r: 1})

    def __add__(self, other):
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, 0) + c
        return ExpSum(out)

    def __neg__(self):
        return ExpSum({r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExpSum):
            return ExpSum({r: c * other for r, c in self.terms.items()})
        out = {}
        for r, c in self.terms.items():
            for s, e in other.terms.items():
                out[r + s] = out.get(r + s, 0) + c * e
        return ExpSum(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ExpSum) and self.terms == other.terms

    def derivative(self, k: int = 1) -> "ExpSum":
        return ExpSum({r: c * r**k for r, c in self.terms.items()})

    def at_zero(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def __call__(self, t: float) -> float:
        return math.fsum(float(c) * math.exp(float(r) * t) for r, c in self.terms.items())

    def __repr__(self):
        items = sorted(self.terms.items(), reverse=True)
        return " + ".join(f"{c}*e^({r}t)" for r, c in items) or "0"


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    out = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def hankel_det_expsum(i: int = 2, power: int = 3) -> ExpSum:
    """det H_i((e^{t k^power})_k) as an exact exponential sum."""
    return _det([[ExpSum.exp((j + l) ** power) for l in range(i + 1)] for j in range(i + 1)])


__all__ = [
    "InvariantChain",
    "MembershipRefusal",
    "default_cap",
    "fd_membership",
    "even_odd_shifts",
    "op_sum",
    "op_product",
    "op_bracket",
    "prime_target_operator",
    "MatrixOperator",
    "matrix_exp",
    "evolve",
    "EventualReport",
    "curve_csv",
    "bisect_sign_change",
    "cube_weights",
    "diag_hankel",
    "diag_sigma",
    "diag_criterion",
    "diag_curve",
    "eventual_diag",
    "quadratic_operator",
    "quadratic_delta",
    "quadratic_min",
    "quadratic_min_direct",
    "quadratic_boundary",
    "eventual_quadratic",
    "ExpSum",
    "hankel_det_expsum",
]
