"""Univariate positivity certificates: Bernstein on [0, 1], f^2 + g^2 on R, Lukacs-Markov on [a, b]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from . import _kernels
from .polyalg import DimensionError, Polynomial

# -- small helpers ---------------------------------------------------------------


@dataclass
class Refusal:
    """No certificate: ``reason`` is "negative" (with a witness point) or "unknown"."""

    reason: str
    detail: str
    witness: Optional[object] = None

    def __bool__(self):
        return False

    def to_dict(self):
        return {"refusal": self.reason, "detail": self.detail, "witness": self.witness}


def _univariate(p: Polynomial):
    if p.n != 1:
        raise DimensionError("certificates are univariate")


def _float_coeffs(p: Polynomial) -> np.ndarray:
    return np.array([float(c) for c in p.coeffs()] or [0.0])


def _sup_norm(p: Polynomial, lo=-2.0, hi=2.0) -> float:
    xs = np.linspace(lo, hi, 1001)
    return float(np.abs(_kernels.horner_grid(_float_coeffs(p), xs)).max())


def _real_critical_points(p: Polynomial, lo=None, hi=None) -> list:
    c = _float_coeffs(p.diff())
    if len(c) <= 1 or not np.any(c):
        return []
    r = np.roots(c[::-1])
    scale = 1.0 + np.abs(r).max() if r.size else 1.0
    pts = sorted(float(z.real) for z in r if abs(z.imag) <= 1e-7 * scale)
    if lo is not None:
        pts = [x for x in pts if lo <= x <= hi]
    return pts


def _negativity_witness(p: Polynomial, lo=None, hi=None, rtol: float = 1e-12):
    """The most negative sampled point of p (critical points, plus a grid on [lo, hi]), or None.

    Rational p is evaluated exactly at the binary value of each sample, so
    a nonnegative p is never refused.
    """
    pts = _real_critical_points(p, lo, hi)
    if lo is None:
        pts.append(0.0)
    else:
        pts += [lo, hi] + np.linspace(float(lo), float(hi), 33).tolist()
    exact = p.is_exact()
    tol = 0.0 if exact else rtol * max(1.0, max(abs(float(c)) for c in p.coeffs()))
    worst, where = 0, None
    for x in pts:
        val = p.eval(Fraction(x)) if exact else p.eval(float(x))
        if val < -tol and (where is None or val < worst):
            worst, where = val, x
    return where


def _try_rationalize(polys, target: Polynomial, combine):
    """Round float coefficients to small rationals; keep them if ``combine`` then rebuilds ``target`` exactly."""
    if not target.is_exact():
        return None
    out = []
    for q in polys:
        if q.is_exact():
            out.append(q)
            continue
        out.append(Polynomial(q.n, {a: Fraction(float(c)).limit_denominator(10**6) for a, c in q.terms.items()}))
    if combine(*out) == target:
        return out
    return None


def _coeff_residual(p: Polynomial, q: Polynomial) -> float:
    d = p - q
    return max((abs(float(c)) for c in d.terms.values()), default=0.0)


# -- Bernstein ---------------------------------------------------------------------

def bernstein_poly(f: Polynomial, d: int) -> Polynomial:
    """sum_k binom(d, k) x^k (1-x)^{d-k} f(k/d), exactly."""
    _univariate(f)
    if d < 1:
        raise ValueError("d must be >= 1")
    x = Polynomial.var(0)
    one_minus = 1 - x
    out = Polynomial.zero(1)
    for k in range(d + 1):
        out = out + (x**k * one_minus ** (d - k)).scale(math.comb(d, k) * f.eval(Fraction(k, d)))
    return out


def bernstein_uniform_error(f: Polynomial, d: int, samples: int = 1001) -> float:
    """max |f - B_{f,d}| over an equispaced grid on [0, 1]."""
    xs = np.linspace(0.0, 1.0, samples)
    diff = _float_coeffs(f - bernstein_poly(f, d))
    return float(np.abs(_kernels.horner_grid(diff, xs)).max())


@dataclass
class BernsteinCert:
    """f = sum_k coeffs[k] x^k (1-x)^{D-k} with every coefficient >= 0."""

    D: int
    coeffs: list
    target: Polynomial

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def reconstruct(self) -> Polynomial:
        x = Polynomial.var(0)
        out = Polynomial.zero(1)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + (x**k * (1 - x) ** (self.D - k)).scale(c)
        return out

    @property
    def residual(self) -> float:
        return _coeff_residual(self.target, self.reconstruct())

    def to_dict(self):
        return {
            "kind": "bernstein",
            "D": self.D,
            "exact": self.exact,
            "coeffs": [{"k": k, "l": self.D - k, "value": c} for k, c in enumerate(self.coeffs)],
            "residual": self.residual,
        }


def bernstein_coefficients(f: Polynomial, D: int) -> list:
    """c_k with f = sum c_k x^k (1-x)^{D-k}, D >= deg f (exact for rational f)."""
    a = f.coeffs()
    m = len(a) - 1
    if m > D:
        raise ValueError("D must be at least deg f")
    out = []
    for k in range(D + 1):
        b = sum((Fraction(math.comb(k, j), math.comb(D, j)) * a[j] for j in range(min(k, m) + 1)), Fraction(0))
        out.append(b * math.comb(D, k))
    return out


def bernstein_certificate(f: Polynomial, D_max: int = 200):
    """First D (stepping up from deg f) whose basis coefficients are all >= 0, else a refusal."""
    _univariate(f)
    if f.is_zero():
        return BernsteinCert(0, [Fraction(0)], f)
    w = _negativity_witness(f, Fraction(0), Fraction(1))
    if w is not None:
        return Refusal("negative", f"f({w}) < 0 on [0, 1]", w)
    for D in range(max(int(f.deg), 0), D_max + 1):
        c = bernstein_coefficients(f, D)
        if all(v >= 0 for v in c):
            return BernsteinCert(D, c, f)
    return Refusal("unknown", f"no nonnegative basis representation up to degree {D_max}")


# -- sums of squares ------------------------------------------------------------------

@dataclass
class SosCert:
    """kind "R": p = f^2 + g^2; "even": f^2 + (x-a)(b-x) g^2; "odd": (x-a) f^2 + (b-x) g^2."""

    kind: str
    f: Polynomial
    g: Polynomial
    target: Polynomial
    a: object = None
    b: object = None
    exact: bool = False

    def reconstruct(self) -> Polynomial:
        x = Polynomial.var(0)
        if self.kind == "R":
            return self.f * self.f + self.g * self.g
        u, v = x - self.a, self.b - x
        if self.kind == "even":
            return self.f * self.f + u * v * self.g * self.g
        return u * self.f * self.f + v * self.g * self.g

    @property
    def residual(self) -> float:
        return _coeff_residual(self.target, self.reconstruct())

    @property
    def relative_residual(self) -> float:
        scale = max((abs(float(c)) for c in self.target.terms.values()), default=1.0)
        return self.residual / max(scale, 1e-300)

    def to_dict(self):
        out = {"kind": self.kind, "f": self.f, "g": self.g, "exact": self.exact, "residual": self.residual}
        if self.kind != "R":
            out["interval"] = [self.a, self.b]
        return out


def _polish_roots(coeffs_asc: np.ndarray, roots: np.ndarray, steps: int = 2) -> np.ndarray:
    P = np.polynomial.Polynomial(coeffs_asc)
    dP = P.deriv()
    out = roots.astype(complex)
    for _ in range(steps):
        d = dP(out)
        safe = np.abs(d) > 1e-300
        step = np.where(safe, P(out) / np.where(safe, d, 1.0), 0.0)
        cand = out - step
        # accept Newton only where it does not increase |P|
        better = np.abs(P(cand)) <= np.abs(P(out))
        out = np.where(better, cand, out)
    return out


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _divmod(a: list, b: list):
    """Ascending-coefficient polynomial division over the rationals."""
    a, b = _trim(list(a)), _trim(list(b))
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = _trim(a[:-1] if a[-1] == 0 else a)
    return q, a


def _gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _derivative(c: list) -> list:
    return [k * c[k] for k in range(1, len(c))]


def squarefree_factors(p: Polynomial) -> list:
    """Yun's algorithm: [(s_i, i)] with p = lead * prod s_i^i, each s_i squarefree and monic (exact)."""
    c = [Fraction(v) for v in p.coeffs()]
    lead = c[-1]
    c = [v / lead for v in c]
    out = []
    g = _gcd(c, _derivative(c))
    w = _divmod(c, g)[0]
    y = _divmod(_derivative(c), g)[0]
    i = 1
    while len(_trim(w)) > 1:
        z = [yy - ww for yy, ww in zip(y + [0] * len(w), _derivative(w) + [0] * len(y))]
        z = _trim(z)
        h = _gcd(w, z) if z else w
        if len(h) > 1:
            out.append((Polynomial.from_coeffs(h), i))
        w = _divmod(w, h)[0]
        y = _divmod(z, h)[0] if z else [Fraction(0)]
        i += 1
    return out


def _simple_roots(p: Polynomial) -> np.ndarray:
    c = _float_coeffs(p)
    if len(c) <= 1:
        return np.array([], dtype=complex)
    return _polish_roots(c, np.roots(c[::-1]), steps=3)


def _mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _to_fraction(v) -> Fraction:
    """Exact rational value of an mpf (or of the real part of an mpc)."""
    v = mpmath.mpf(v.real) if isinstance(v, mpmath.mpc) else mpmath.mpf(v)
    sign, man, exp, _ = v._mpf_
    out = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -out if sign else out


def _refine(p: Polynomial, z: complex, steps: int = 60):
    """Newton on a simple root at the working mpmath precision."""
    c = [_mpf(v) for v in p.coeffs()][::-1]
    dc = [c[i] * (len(c) - 1 - i) for i in range(len(c) - 1)]
    w = mpmath.mpc(z)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 8)
    for _ in range(steps):
        d = mpmath.polyval(dc, w)
        if d == 0:
            break
        step = mpmath.polyval(c, w) / d
        w -= step
        if abs(step) <= eps * (1 + abs(w)):
            break
    return w


def _roots(p: Polynomial, refine: bool = False) -> list:
    """[(root, multiplicity)]; exact square-free splitting first when p is rational.

    With ``refine`` the roots are mpc values polished at the working precision.
    """
    parts = squarefree_factors(p) if p.is_exact() and int(p.deg) > 0 else [(p, 1)]
    out = []
    for s, k in parts:
        for z in _simple_roots(s):
            out.append((_refine(s, z) if refine else z, k))
    return out


WORK_DPS = 40


def _pair_real(reals: list, tol: float):
    """Pair a sorted list of (numerically) real roots into double roots; None if one is left over."""
    out = []
    i = 0
    while i < len(reals):
        if i + 1 < len(reals) and abs(float(reals[i + 1] - reals[i])) <= tol:
            out.append((reals[i] + reals[i + 1]) / 2)
            i += 2
        else:
            return None, float(reals[i])
    return out, None


def _split(roots, scale):
    real_tol = 1e-6 * scale
    upper = [z for z in roots if z.imag > real_tol]
    reals = sorted((z.real for z in roots if abs(z.imag) <= real_tol), key=float)
    return upper, reals


def _frac_poly(coeffs) -> Polynomial:
    return Polynomial.from_coeffs([_to_fraction(c) for c in coeffs])


def sos_decompose_R(p: Polynomial):
    """p = f^2 + g^2 with f + i g = sqrt(lead) * prod (x - z) over one root of each conjugate pair.

    The product is formed at ``WORK_DPS`` digits and stored with rational
    coefficients, so the reported residual is that of the returned f, g.
    """
    _univariate(p)
    if p.is_zero():
        return SosCert("R", Polynomial.zero(1), Polynomial.zero(1), p, exact=True)
    deg = int(p.deg)
    lead = p.leading_coeff()
    if deg % 2 or lead < 0:
        return Refusal("negative", "p must have even degree and positive leading coefficient")
    w = _negativity_witness(p)
    if w is not None:
        return Refusal("negative", f"p({w}) < 0", w)
    with mpmath.workdps(WORK_DPS):
        roots = [z for z, k in _roots(p, refine=True) for _ in range(k)]
        scale = 1.0 + max((float(abs(z)) for z in roots), default=0.0)
        upper, reals = _split(roots, scale)
        doubles, odd = _pair_real(reals, 1e-4 * scale)
        if doubles is None:
            return Refusal("negative", f"real root near {odd} of odd multiplicity", odd)
        h = [mpmath.sqrt(_mpf(lead))]
        for z in list(upper) + doubles:
            nxt = [mpmath.mpc(0)] * (len(h) + 1)
            for i, c in enumerate(h):
                nxt[i + 1] += c
                nxt[i] -= c * z
            h = nxt
        f = _frac_poly([mpmath.re(c) for c in h])
        g = _frac_poly([mpmath.im(c) for c in h])
    cert = SosCert("R", f, g, p)
    if cert.reconstruct() == p:
        cert.exact = True
        return cert
    ex = _try_rationalize([f, g], p, lambda f, g: f * f + g * g)
    if ex is not None:
        cert.f, cert.g = ex
        cert.exact = True
    return cert


# -- Lukacs-Markov --------------------------------------------------------------------

class _Form:
    """even: f^2 + w g^2 (w = (x-a)(b-x)); odd: u f^2 + v g^2 (u = x-a, v = b-x)."""

    __slots__ = ("odd", "f", "g")

    def __init__(self, odd: bool, f: Polynomial, g: Polynomial):
        self.odd, self.f, self.g = odd, f, g


def _times(P: _Form, Q: _Form, u: Polynomial, v: Polynomial) -> _Form:
    w = u * v
    if not P.odd and not Q.odd:
        return _Form(False, P.f * Q.f - w * P.g * Q.g, P.f * Q.g + Q.f * P.g)
    if P.odd and Q.odd:
        return _Form(False, u * P.f * Q.f + v * P.g * Q.g, P.f * Q.g - P.g * Q.f)
    E, O = (P, Q) if not P.odd else (Q, P)
    return _Form(True, E.f * O.f + v * E.g * O.g, E.f * O.g - u * E.g * O.f)


def _sqrt(c) -> Fraction:
    """Square root of a nonnegative rational: exact for perfect squares, else ``WORK_DPS`` digits."""
    c = Fraction(c)
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return _to_fraction(mpmath.sqrt(_mpf(c)))


def _round(q: Polynomial) -> Polynomial:
    # keep coefficient sizes bounded between products
    return Polynomial(q.n, {a: _to_fraction(_mpf(c)) for a, c in q.terms.items()})


def lukacs_markov(p: Polynomial, a=0, b=1):
    """Degree-sharp certificate on [a, b] assembled from the factorization of p.

    Every real root outside (a, b) and every complex pair is written in one of
    the two forms with nonnegative data, then the forms are multiplied with
    identities that keep the degree bounds (deg f <= m, deg g <= m - 1 for
    degree 2m; deg f, g <= m for degree 2m + 1). Irrational data is carried
    at ``WORK_DPS`` digits as rationals.
    """
    _univariate(p)
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if p.is_zero():
        return SosCert("even", Polynomial.zero(1), Polynomial.zero(1), p, a, b, True)
    w = _negativity_witness(p, a, b)
    if w is not None:
        return Refusal("negative", f"p({w}) < 0 on [{a}, {b}]", w)
    x = Polynomial.var(0)
    u, v = x - a, b - x
    one, zero = Polynomial.const(1), Polynomial.const(0)
    lead = Fraction(p.leading_coeff())
    sign = 1
    with mpmath.workdps(WORK_DPS):
        ma, mb = _mpf(a), _mpf(b)
        L = mb - ma
        roots = [z for z, k in _roots(p, refine=True) for _ in range(k)]
        scale = 1.0 + max((float(abs(z)) for z in roots), default=0.0)
        upper, reals = _split(roots, scale)
        bd_tol = 1e-7 * scale
        factors = []
        interior = []
        for z in upper:
            # q = |x - z|^2 = alpha u^2 + beta v^2 + gamma uv on [a, b]
            # x^2 coefficient gives alpha + beta - gamma = 1; |b - z|^2, |a - z|^2 avoid cancellation
            alpha = abs(mb - z) ** 2 / L**2
            beta = abs(ma - z) ** 2 / L**2
            gamma = alpha + beta - 1
            f = u.scale(_to_fraction(mpmath.sqrt(alpha))) - v.scale(_to_fraction(mpmath.sqrt(beta)))
            gg = max(gamma + 2 * mpmath.sqrt(alpha * beta), mpmath.mpf(0))
            factors.append(_Form(False, f, Polynomial.const(_to_fraction(mpmath.sqrt(gg)))))
        for r in reals:
            if abs(float(r - ma)) <= bd_tol:
                factors.append(_Form(True, one, zero))
            elif abs(float(r - mb)) <= bd_tol:
                factors.append(_Form(True, zero, one))
                sign = -sign
            elif r < ma:
                k = (ma - r) / L
                factors.append(_Form(True, Polynomial.const(_to_fraction(mpmath.sqrt(1 + k))),
                                     Polynomial.const(_to_fraction(mpmath.sqrt(k)))))
            elif r > mb:
                k = (r - mb) / L
                factors.append(_Form(True, Polynomial.const(_to_fraction(mpmath.sqrt(k))),
                                     Polynomial.const(_to_fraction(mpmath.sqrt(1 + k)))))
                sign = -sign
            else:
                interior.append(r)
        doubles, odd = _pair_real(interior, 1e-4 * scale)
        if doubles is None:
            return Refusal("negative", f"root {odd} inside [{a}, {b}] of odd multiplicity", odd)
        for r in doubles:
            factors.append(_Form(False, x - _to_fraction(r), zero))
        c = lead * sign
        if c < 0:
            return Refusal("negative", "sign bookkeeping left a negative constant; p is not >= 0 on [a, b]")
        acc = _Form(False, Polynomial.const(_sqrt(c)), zero)
        for F in factors:
            acc = _times(acc, F, u, v)
            acc.f, acc.g = _round(acc.f), _round(acc.g)
    kind = "odd" if acc.odd else "even"
    cert = SosCert(kind, acc.f, acc.g, p, a, b)
    if cert.reconstruct() == p:
        cert.exact = True
        return cert
    combine = (lambda f, g: f * f + u * v * g * g) if kind == "even" else (lambda f, g: u * f * f + v * g * g)
    ex = _try_rationalize([acc.f, acc.g], p, combine)
    if ex is not None:
        cert.f, cert.g = ex
        cert.exact = True
    return cert


__all__ = [
    "Refusal",
    "bernstein_poly",
    "bernstein_coefficients",
    "bernstein_uniform_error",
    "BernsteinCert",
    "bernstein_certificate",
    "SosCert",
    "sos_decompose_R",
    "lukacs_markov",
    "squarefree_factors",
]
