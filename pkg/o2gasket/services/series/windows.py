"""
Combinatorial building blocks: h_down, half-integer harmonic windows and the
coefficients of 1 - sqrt(1 - z).
"""

from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from numpy.typing import ArrayLike

from o2gasket.core.exceptions import PreconditionError
from o2gasket.services.series.special import digamma_ext

EXACT_WINDOW_LIMIT = 64
DIRECT_WINDOW_TERMS = 32


def h_down(ell: int) -> float:
    """2^{-2l} binom(2l, l) for l >= 0, zero for negative l"""
    if ell < 0:
        return 0.0
    value = 1.0
    for i in range(ell):
        value *= (2 * i + 1) / (2 * i + 2)
    return value


def h_down_exact(ell: int) -> Fraction:
    if ell < 0:
        return Fraction(0)
    value = Fraction(1)
    for i in range(ell):
        value *= Fraction(2 * i + 1, 2 * i + 2)
    return value


def h_down_array(n: int) -> np.ndarray:
    """h_down(0), ..., h_down(n - 1) by a cumulative product"""
    if n <= 0:
        return np.zeros(0)
    i = np.arange(n - 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((2 * i + 1) / (2 * i + 2))))


@lru_cache(maxsize=None)
def _sqrt_ladder_table(n: int) -> Tuple[Fraction, ...]:
    coeffs: List[Fraction] = [Fraction(0)]
    if n >= 1:
        coeffs.append(Fraction(1, 2))
    for k in range(1, n):
        coeffs.append(coeffs[k] * Fraction(2 * k - 1, 2 * k + 2))
    return tuple(coeffs)


def sqrt_ladder_coeff(k: int) -> Fraction:
    """[z^k](1 - sqrt(1 - z)), the law of the first strict descending ladder height"""
    if k <= 0:
        return Fraction(0)
    # Grow the cached table in powers of two so repeated calls stay cheap
    size = 1 << max(k, 1).bit_length()
    return _sqrt_ladder_table(size)[k]


def sqrt_ladder_coeffs(n: int) -> List[Fraction]:
    """Coefficients 0..n - 1 of 1 - sqrt(1 - z)"""
    if n <= 0:
        return []
    size = 1 << max(n, 1).bit_length()
    return list(_sqrt_ladder_table(size)[:n])


def _window_bounds(k: int, j: int) -> Tuple[int, int, int]:
    """
    Reduce sum_{m=k-j}^{k+j-1} 1/(m + 1/2) to sign * sum_{m=a}^{b} 1/(m + 1/2)
    with 0 <= a. Terms m and -m-1 cancel, so a window straddling -1/2 keeps
    only its unmatched end.
    """
    lo, hi = k - j, k + j - 1
    if lo >= 0:
        return 1, lo, hi
    if hi < 0:
        return -1, -hi - 1, -lo - 1
    if hi >= -lo - 1:
        return 1, -lo, hi
    return -1, hi + 1, -lo - 1


def half_harmonic_window_exact(k: int, j: int) -> Fraction:
    if j < 1:
        raise PreconditionError(f"window half-width must be >= 1, got {j}")
    sign, a, b = _window_bounds(k, j)
    return sign * sum((Fraction(2, 2 * m + 1) for m in range(a, b + 1)), Fraction(0))


def half_harmonic_window(k: int, j: int) -> float:
    """sum_{m=k-j}^{k+j-1} 1/(m + 1/2) with the sign-symmetric pairs cancelled first"""
    if j < 1:
        raise PreconditionError(f"window half-width must be >= 1, got {j}")
    if abs(k) <= EXACT_WINDOW_LIMIT and j <= EXACT_WINDOW_LIMIT:
        return float(half_harmonic_window_exact(k, j))
    sign, a, b = _window_bounds(k, j)
    if b < a:
        return 0.0
    if b - a < DIRECT_WINDOW_TERMS:
        m = np.arange(a, b + 1, dtype=float)
        return sign * float(np.sum(1.0 / (m + 0.5)))
    psi = digamma_ext(np.array([b + 1.5, a + 0.5]))
    return sign * float(psi[0] - psi[1])


def half_harmonic_windows(k: int, js: ArrayLike) -> np.ndarray:
    """Vectorized window sums for one k and many half-widths"""
    js = np.asarray(js, dtype=np.int64)
    lo = k - js
    hi = k + js - 1
    sign = np.ones(js.shape)
    a = lo.copy()
    b = hi.copy()
    below = hi < 0
    sign[below] = -1.0
    a[below] = -hi[below] - 1
    b[below] = -lo[below] - 1
    straddle = (lo < 0) & (hi >= 0)
    upper = straddle & (hi >= -lo - 1)
    a[upper] = -lo[upper]
    lower = straddle & ~upper
    sign[lower] = -1.0
    a[lower] = hi[lower] + 1
    b[lower] = -lo[lower] - 1
    empty = b < a
    b = np.where(empty, a - 1, b)
    psi_hi = digamma_ext(b + 1.5)
    psi_lo = digamma_ext(a + 0.5)
    return np.where(empty, 0.0, sign * (psi_hi - psi_lo))


def kernel(ell: ArrayLike, k: int) -> np.ndarray:
    """4 / (4(l - k - 1)^2 - 1)"""
    a = np.asarray(ell, dtype=float) - k - 1
    return 4.0 / (4.0 * a * a - 1.0)


def kernel_column_sum(a0: int) -> float:
    """sum_{a >= a0} 4/(4a^2 - 1) = 1/(a0 - 1/2), valid for every integer a0"""
    return 1.0 / (a0 - 0.5)


def kernel_row_partial_sum(ell: int, K: int) -> float:
    """sum_{k=-K}^{K} 4/(4(l - k - 1)^2 - 1) in closed form; tends to 0 as K grows"""
    # a = l - k - 1 runs over [l - K - 1, l + K - 1]
    lo, hi = ell - K - 1, ell + K - 1
    return kernel_column_sum(lo) - kernel_column_sum(hi + 1)
