"""
Coefficients f_l of z / sqrt(1 - z) * (1 - G(z)) for a finitely supported ring
sequence.

For g supported on 1..J the coefficients are a finite combination of simple
poles,

    pi * f_l = sum_s c_s / (l + s),   s = +-(i - 1/2), i = 1..J,
    c_s = [|s| = 1/2] - sum_{j >= |s| + 1/2} g_j,

which is what makes every downstream series summable in closed form.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from o2gasket.core.exceptions import PreconditionError
from o2gasket.schemas.series import GSequence, TruncationConfig
from o2gasket.services.series.special import (
    NEAR_POLE_SEPARATION,
    near_pole_pair,
    digamma_ext,
    trigamma_ext,
)
from o2gasket.services.series.windows import (
    EXACT_WINDOW_LIMIT,
    half_harmonic_window_exact,
    half_harmonic_windows,
)

logger = logging.getLogger(__name__)

# Number of matrix entries evaluated per block in the vectorized pole series
BLOCK_ENTRIES = 1 << 22
EPS = float(np.finfo(float).eps)


class FCoefficients:
    """
    Evaluation of f_k for one ring sequence.

    Immutable after construction; every cache is filled in ``__init__`` so
    instances can be shared between threads.
    """

    def __init__(self, g: GSequence):
        self.g = g
        self.support = g.support
        entries = np.asarray(g.entries, dtype=float)
        if self.support:
            tails = np.cumsum(entries[::-1])[::-1]
            positive = -tails
            positive[0] += 1.0
        else:
            positive = np.array([1.0])
        half = np.arange(1, positive.size + 1, dtype=float) - 0.5
        # weights of the poles at +-1/2, +-3/2, ...
        self.positive_weights = positive
        self.positive_shifts = half
        self.shifts = np.concatenate((-half[::-1], half))
        self.weights = np.concatenate((positive[::-1], positive))
        self.abs_weight = float(np.sum(np.abs(self.weights)))
        # 1 - sum_j j g_j, read off the pole weights
        self.drift = math.fsum(positive.tolist())
        self.moment_prefix = np.cumsum(np.arange(1, self.support + 1) * entries)
        self._psi = digamma_ext(1.0 + self.shifts)
        self._trigamma = trigamma_ext(1.0 + self.shifts)
        # |f_l - 2(1 - sigma)/(pi l)| <= curvature / (l (l^2 - J^2)) for l > J
        self.curvature = (2.0 / math.pi) * float(np.sum(np.abs(positive) * half * half))
        logger.debug(f"f coefficients: J={self.support}, drift={self.drift:.3e}, poles={self.shifts.size}")

    @property
    def leading_coefficient(self) -> float:
        """a in f_l ~ a / l"""
        return 2.0 * self.drift / math.pi

    def moment_upto(self, m: int) -> float:
        """sum_{j <= m} j g_j"""
        if m <= 0 or self.support == 0:
            return 0.0
        return float(self.moment_prefix[min(m, self.support) - 1])

    def coefficient(self, k: int) -> float:
        """f_k from the half-harmonic window form, j-sum carried out exactly when small"""
        if k < 1:
            raise PreconditionError(f"f_k is defined for k >= 1, got {k}")
        head = 1.0 / (k - 0.5) + 1.0 / (k + 0.5)
        if self.support == 0:
            return head / math.pi
        if k <= EXACT_WINDOW_LIMIT and self.support <= EXACT_WINDOW_LIMIT:
            windows = np.array([float(half_harmonic_window_exact(k, j)) for j in range(1, self.support + 1)])
        else:
            windows = half_harmonic_windows(k, np.arange(1, self.support + 1))
        entries = np.asarray(self.g.entries)
        return (head - math.fsum((entries * windows).tolist())) / math.pi

    def values(self, ells: ArrayLike) -> np.ndarray:
        """f_l for an array of l >= 1 through the pole expansion"""
        ells = np.asarray(ells, dtype=float)
        out = np.zeros(ells.shape)
        for s, c in zip(self.positive_shifts, self.positive_weights):
            if c != 0.0:
                out += c * (2.0 * ells) / (ells * ells - s * s)
        return out / math.pi

    def corrected_values(self, ells: ArrayLike) -> np.ndarray:
        """f_l - a/l, summed pole by pole as 2 c_s s^2 / (l (l^2 - s^2)) so nothing cancels"""
        ells = np.asarray(ells, dtype=float)
        out = np.zeros(ells.shape)
        for s, c in zip(self.positive_shifts, self.positive_weights):
            if c != 0.0:
                out += c * (2.0 * s * s) / (ells * (ells * ells - s * s))
        return out / math.pi

    def window_values(self, ells: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """
        f_l from the half-harmonic windows, independent of the pole expansion.

        For l, j >= 1 the cancelled window is psi(l + j + 1/2) - psi(|l - j| + 1/2).
        Returns the values and a per-term rounding bound.
        """
        ells = np.atleast_1d(np.asarray(ells, dtype=np.int64))
        head = 1.0 / (ells - 0.5) + 1.0 / (ells + 0.5)
        if self.support == 0:
            return head / math.pi, 4.0 * EPS * head / math.pi
        entries = np.asarray(self.g.entries)
        js = np.arange(1, self.support + 1)[:, None]
        total = np.empty(ells.shape, dtype=float)
        block = max(1, BLOCK_ENTRIES // self.support)
        for start in range(0, ells.size, block):
            ell = ells[None, start:start + block]
            windows = digamma_ext(ell + js + 0.5) - digamma_ext(np.abs(ell - js) + 0.5)
            total[start:start + block] = entries @ windows
        values = (head - total) / math.pi
        scale = 16.0 * EPS * np.log(ells + self.support + 2.0)
        return values, scale * (head + float(np.sum(entries)) + np.abs(total)) / math.pi

    def tail_majorant(self, ell: float) -> float:
        """Upper bound on |f_l| valid for l > 2J"""
        ell = float(ell)
        return abs(self.leading_coefficient) / ell + (4.0 / 3.0) * self.curvature / ell**3

    def pole_series(self, alpha: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """
        Q(alpha) = sum_s c_s sum_{l >= 1} 1/((l + s)(l + alpha)) for each alpha,
        together with sum_s |c_s| |P(s, alpha)| for error estimates.

        ``alpha`` must avoid the negative integers. Coincident poles use
        trigamma and nearly coincident ones a short expansion at the midpoint.
        """
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        values = np.empty(alpha.shape)
        magnitude = np.empty(alpha.shape)
        n_s = self.shifts.size
        block = max(1, BLOCK_ENTRIES // n_s)
        s = self.shifts[:, None]
        psi_s = self._psi[:, None]
        for start in range(0, alpha.size, block):
            a = alpha[start:start + block]
            psi_a = digamma_ext(1.0 + a)[None, :]
            diff = a[None, :] - s
            near = np.abs(diff) < NEAR_POLE_SEPARATION
            with np.errstate(divide="ignore", invalid="ignore"):
                P = (psi_a - psi_s) / diff
            if np.any(near):
                rows, cols = np.nonzero(near)
                same = diff[rows, cols] == 0
                P[rows[same], cols[same]] = self._trigamma[rows[same]]
                if np.any(~same):
                    r, c = rows[~same], cols[~same]
                    P[r, c] = near_pole_pair(self.shifts[r], a[c])
            values[start:start + block] = self.weights @ P
            magnitude[start:start + block] = np.abs(self.weights) @ np.abs(P)
        return values, magnitude


@lru_cache(maxsize=32)
def coefficients_for(g: GSequence) -> FCoefficients:
    return FCoefficients(g)


def f_coeff(g: GSequence, k: int, cfg: Optional[TruncationConfig] = None) -> float:
    """f_k; exact up to rounding for finitely supported g, so ``cfg`` only sets the signature"""
    return coefficients_for(g).coefficient(k)


def _inner_brackets(n: int) -> Tuple[Fraction, ...]:
    """sum_{l=0}^{m} (1/(l + 1/2) + 1/(l - 1/2)) for m = 0..n-1, exactly"""
    out = []
    acc = Fraction(0)
    for ell in range(n):
        acc += Fraction(2, 2 * ell + 1) + Fraction(2, 2 * ell - 1)
        out.append(acc)
    return tuple(out)


def f_total(g: GSequence) -> float:
    """
    sum_{l >= 1} f_l for a ring sequence with sum_j j g_j = 1.

    Uses the triple sum (1/pi) sum_j g_j sum_{m<j} sum_{l=0}^{m} (1/(l+1/2) + 1/(l-1/2));
    the l = 0 term of the inner sum is 2 - 2 = 0.
    """
    if abs(g.first_moment - 1.0) > g.moment_tolerance:
        raise PreconditionError(f"f_total needs first moment 1, got {g.first_moment!r}")
    if g.support == 0:
        return 0.0
    if g.support <= EXACT_WINDOW_LIMIT:
        brackets = [float(x) for x in _inner_brackets(g.support)]
        outer = np.cumsum(brackets)
    else:
        # bracket_m = 2 H(m) + 1/(m + 1/2) - 2 with H(m) = sum_{l < m} 1/(l + 1/2)
        m = np.arange(g.support, dtype=float)
        harmonic = np.concatenate(([0.0], np.cumsum(1.0 / (m[:-1] + 0.5))))
        outer = np.cumsum(2.0 * harmonic + 1.0 / (m + 0.5) - 2.0)
    entries = np.asarray(g.entries)
    return math.fsum((entries * outer).tolist()) / math.pi
