"""Independent oracles and test doubles shared across the test suite.

Everything here is deliberately implemented by a different route than the
library: exact rational arithmetic for coupling coefficients, brute-force
series, and stub model objects for degenerate cases.
"""

from fractions import Fraction
from math import factorial

import numpy as np


def racah_w2_exact(l1, l2, l3):
    """Squared zero-m 3j symbol as an exact Fraction via the Racah single sum.

    3j(l1 l2 l3; 0 0 0) = (-1)^(l1-l2) sqrt(Delta) l1! l2! l3! * S with
    Delta = (l1+l2-l3)!(l1-l2+l3)!(-l1+l2+l3)!/(l1+l2+l3+1)! and
    S = sum_k (-1)^k / [k!(l1+l2-l3-k)!(l1-k)!(l2-k)!(l3-l2+k)!(l3-l1+k)!],
    so the square is Delta * (l1! l2! l3!)^2 * S^2, an exact rational.
    """
    if (l1 + l2 + l3) % 2:
        return Fraction(0)
    if l3 < abs(l1 - l2) or l3 > l1 + l2:
        return Fraction(0)
    delta = Fraction(
        factorial(l1 + l2 - l3) * factorial(l1 - l2 + l3) * factorial(-l1 + l2 + l3),
        factorial(l1 + l2 + l3 + 1))
    k_lo = max(0, l2 - l3, l1 - l3)
    k_hi = min(l1 + l2 - l3, l1, l2)
    s = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        den = (factorial(k) * factorial(l1 + l2 - l3 - k) * factorial(l1 - k)
               * factorial(l2 - k) * factorial(l3 - l2 + k) * factorial(l3 - l1 + k))
        s += Fraction((-1) ** k, den)
    amp = Fraction(factorial(l1) * factorial(l2) * factorial(l3))
    return delta * (amp * s) ** 2


class FlatWindow:
    """Test-only window with b = 1 on the open support (so b^2 = 1)."""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.where((x > 0.5) & (x < 2.0), 1.0, 0.0)
        return float(out[0]) if scalar else out


class ZeroSpectrum:
    """Test-only spectrum with C_l identically zero."""

    alpha = 3.0

    def g_ratio(self, ls):
        ls = np.asarray(ls, dtype=float)
        return np.zeros_like(ls)
