"""
Digamma and trigamma wrappers and the pole-pair series built on them.

scipy supplies psi and psi'. The ``*_ext`` variants accept numpy arrays,
reject the non-positive integers and cover the negative axis; trigamma
goes through the reflection formula there.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special
from scipy.special import zeta as hurwitz_zeta

from o2gasket.core.exceptions import DomainError

# Below this separation the difference quotient of digamma loses too many digits
NEAR_POLE_SEPARATION = 1e-3


def _check_no_poles(x: np.ndarray) -> None:
    poles = (x <= 0) & (x == np.floor(x))
    if np.any(poles):
        raise DomainError(f"pole of digamma at x = {x[poles][0]!r}")


def _fractional_part(x: np.ndarray) -> np.ndarray:
    return x - np.floor(x)


def digamma_ext(x: ArrayLike) -> np.ndarray:
    """Digamma on the real line minus the non-positive integers"""
    x = np.asarray(x, dtype=float)
    _check_no_poles(x)
    out = np.empty_like(x)
    positive = x > 0
    out[positive] = special.digamma(x[positive])
    if not np.all(positive):
        xn = x[~positive]
        frac = _fractional_part(xn)
        # cot(pi x) vanishes exactly at half-integers
        cot = np.where(frac == 0.5, 0.0, 1.0 / np.tan(math.pi * frac))
        out[~positive] = special.digamma(1.0 - xn) - math.pi * cot
    return out


def trigamma_ext(x: ArrayLike) -> np.ndarray:
    """Trigamma on the real line minus the non-positive integers"""
    x = np.asarray(x, dtype=float)
    _check_no_poles(x)
    out = np.empty_like(x)
    positive = x > 0
    out[positive] = special.polygamma(1, x[positive])
    if not np.all(positive):
        xn = x[~positive]
        s = np.sin(math.pi * _fractional_part(xn))
        out[~positive] = (math.pi * math.pi) / (s * s) - special.polygamma(1, 1.0 - xn)
    return out


def digamma(x: float) -> float:
    """psi(x) for x > 0"""
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    return float(special.digamma(x))


def trigamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"trigamma requires x > 0, got {x!r}")
    return float(special.polygamma(1, x))


def near_pole_pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # sum_l 1/((l+m)^2 - d^2) expanded in d = (b - a)/2 around the midpoint m
    m = 0.5 * (a + b)
    d2 = 0.25 * (b - a) ** 2
    q = 1.0 + m
    return (
        special.polygamma(1, q)
        + d2 * hurwitz_zeta(4.0, q)
        + d2 * d2 * hurwitz_zeta(6.0, q)
        + d2 * d2 * d2 * hurwitz_zeta(8.0, q)
    )


def pole_pair_sums(alpha: ArrayLike, beta: ArrayLike) -> np.ndarray:
    """
    Vectorized sum_{l >= 1} 1 / ((l + alpha)(l + beta)).

    Broadcasts ``alpha`` against ``beta``. Shifts below -1 go through the
    reflection formulas, which is exact algebra for every shift that is not
    a negative integer.
    """
    a, b = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
    a = a.ravel()
    b = b.ravel()
    out = np.empty_like(a)
    diff = b - a
    near = np.abs(diff) < NEAR_POLE_SEPARATION
    far = ~near
    if np.any(far):
        out[far] = (digamma_ext(1.0 + b[far]) - digamma_ext(1.0 + a[far])) / diff[far]
    if np.any(near):
        exact = near & (diff == 0)
        out[exact] = trigamma_ext(1.0 + a[exact])
        close = near & ~exact
        if np.any(close):
            if np.any(np.minimum(a[close], b[close]) <= -1):
                raise DomainError("near-coincident poles below -1 are not supported")
            out[close] = near_pole_pair(a[close], b[close])
    return out.reshape(np.broadcast(np.asarray(alpha), np.asarray(beta)).shape)


def pole_pair_sum(alpha: float, beta: float) -> float:
    """
    sum_{l >= 1} 1 / ((l + alpha)(l + beta)) for a single pair of shifts.

    When a shift lies at or below -1 the first n = floor(-min(alpha, beta))
    terms are summed directly and the digamma formula is applied to the
    remaining tail, whose shifts exceed -1.
    """
    for shift in (alpha, beta):
        if shift <= -1 and shift == math.floor(shift):
            raise DomainError(f"term with l = {-int(shift)} is singular")
    lowest = min(alpha, beta)
    n = int(math.floor(-lowest)) if lowest <= -1 else 0
    head = math.fsum(1.0 / ((ell + alpha) * (ell + beta)) for ell in range(1, n + 1))
    a, b = alpha + n, beta + n
    if abs(b - a) >= NEAR_POLE_SEPARATION:
        tail = (digamma(1.0 + b) - digamma(1.0 + a)) / (b - a)
    elif a == b:
        tail = trigamma(1.0 + a)
    else:
        tail = float(near_pole_pair(np.array([a]), np.array([b]))[0])
    return head + tail

