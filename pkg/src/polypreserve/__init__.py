"""Exact and numerical tools for linear operators on polynomials.

Operators are stored in canonical form T = sum_alpha q_alpha d^alpha. The
package covers constant-coefficient exp/log, moment-sequence positivity tests,
positivity-preserver and generator checks, semigroup evolution and positivity
certificates.
"""

from .polyalg import DimensionError, Polynomial, TruncationError, multi_indices
from .opcore import OperatorSeries, apply, extract_canonical, freeze
from .cgroup import CAlgebraElement, CGroupElement, ConstSeries

__version__ = "0.1.0"

__all__ = [
    "DimensionError",
    "TruncationError",
    "Polynomial",
    "multi_indices",
    "OperatorSeries",
    "apply",
    "extract_canonical",
    "freeze",
    "ConstSeries",
    "CGroupElement",
    "CAlgebraElement",
]
