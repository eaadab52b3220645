"""Float kernels with two interchangeable backends.

Each kernel has a numba ``@njit`` version and a pure-numpy version with the
same signature. ``POLYPRESERVE_NUMBA=0`` (or numba missing) selects numpy.
Both paths are always importable so tests and the benchmark can compare them.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install requirement
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("POLYPRESERVE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


# -- numpy reference path -----------------------------------------------------

def min_eig_batch_numpy(mats: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of each symmetric matrix in a (B, m, m) stack."""
    return np.linalg.eigvalsh(mats)[:, 0]


def quadratic_min_numpy(delta: float, t: np.ndarray) -> np.ndarray:
    """m(a, t) with delta = a^2 - 1/5, evaluated without cancellation.

    m = (B(t) + delta * P(t)) / E with E = e^t - 1, B = (3t^2 - E(8t + t^2))/5
    and P = 5 + 8t + 4t^2 - (10 + 8t + t^2)e^t + 5e^{2t} >= 0, which is computed
    from the Taylor tails F = E - t and G = F - t^2/2.
    """
    t = np.asarray(t, dtype=float)
    E = np.expm1(t)
    F = np.where(np.abs(t) < 1.0, _tail2_numpy(t), E - t)
    G = np.where(np.abs(t) < 1.0, _tail3_numpy(t), F - 0.5 * t * t)
    P = 2.0 * t * G + F * (1.5 * t * t + 5.0 * G)
    # P = 3t^2 - (8t + t^2)E + 5E^2 rewritten: every term above is >= 0 for t >= 0
    B = (3.0 * t * t - E * (8.0 * t + t * t)) / 5.0
    return (B + delta * P) / E


def _tail2_numpy(t):
    # e^t - 1 - t for |t| < 1
    term = t * t / 2.0
    out = term.copy()
    for k in range(3, 26):
        term = term * t / k
        out = out + term
    return out


def _tail3_numpy(t):
    # e^t - 1 - t - t^2/2 for |t| < 1
    out = np.zeros_like(t)
    term = t * t / 2.0
    for k in range(3, 26):
        term = term * t / k
        out = out + term
    return out


def horner_grid_numpy(coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Ascending-coefficient polynomial evaluated on a grid."""
    out = np.zeros_like(xs, dtype=float)
    for c in coeffs[::-1]:
        out = out * xs + c
    return out


# -- numba path ------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _jacobi_min(A):
        m = A.shape[0]
        a = A.copy()
        for sweep in range(100):
            off = 0.0
            for p in range(m):
                for q in range(p + 1, m):
                    off += a[p, q] * a[p, q]
            scale = 0.0
            for p in range(m):
                scale += a[p, p] * a[p, p]
            if off <= 1e-34 * (scale + off) or off == 0.0:
                break
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if theta >= 0:
                        t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                    else:
                        t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(m):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(m):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * aqk
                        a[q, k] = s * apk + c * aqk
        best = a[0, 0]
        for p in range(1, m):
            if a[p, p] < best:
                best = a[p, p]
        return best

    @numba.njit(cache=True)
    def min_eig_batch_numba(mats):
        out = np.empty(mats.shape[0])
        for b in range(mats.shape[0]):
            out[b] = _jacobi_min(mats[b])
        return out

    @numba.njit(cache=True)
    def _tails(t):
        if abs(t) < 1.0:
            term = t * t / 2.0
            F = term
            G = 0.0
            for k in range(3, 26):
                term = term * t / k
                F += term
                G += term
            return F, G
        E = math.expm1(t)
        F = E - t
        return F, F - 0.5 * t * t

    @numba.njit(cache=True, error_model="numpy")
    def quadratic_min_numba(delta, t):
        out = np.empty(t.shape[0])
        for i in range(t.shape[0]):
            ti = t[i]
            E = math.expm1(ti)
            F, G = _tails(ti)
            P = 2.0 * ti * G + F * (1.5 * ti * ti + 5.0 * G)
            B = (3.0 * ti * ti - E * (8.0 * ti + ti * ti)) / 5.0
            out[i] = (B + delta * P) / E
        return out

    @numba.njit(cache=True)
    def horner_grid_numba(coeffs, xs):
        out = np.empty(xs.shape[0])
        for i in range(xs.shape[0]):
            acc = 0.0
            for j in range(coeffs.shape[0] - 1, -1, -1):
                acc = acc * xs[i] + coeffs[j]
            out[i] = acc
        return out

else:  # pragma: no cover
    min_eig_batch_numba = min_eig_batch_numpy
    quadratic_min_numba = quadratic_min_numpy
    horner_grid_numba = horner_grid_numpy


# -- dispatch ----------------------------------------------------------------------

def min_eig_batch(mats) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=float)
    if numba_enabled():
        return min_eig_batch_numba(mats)
    return min_eig_batch_numpy(mats)


def quadratic_min(delta: float, t) -> np.ndarray:
    """Both backends; t = 0 gets the continuous extension m = 0."""
    t = np.ascontiguousarray(np.atleast_1d(t), dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = quadratic_min_numba(float(delta), t) if numba_enabled() else quadratic_min_numpy(float(delta), t)
    out[t == 0] = 0.0
    return out


def horner_grid(coeffs, xs) -> np.ndarray:
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    xs = np.ascontiguousarray(xs, dtype=float)
    if numba_enabled():
        return horner_grid_numba(coeffs, xs)
    return horner_grid_numpy(coeffs, xs)
