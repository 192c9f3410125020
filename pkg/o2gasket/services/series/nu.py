"""
Values of the step distribution nu(k) = 1_{k=0} + (1/pi) sum_l f_l K_k(l) with
kernel K_k(l) = 4 / (4(l - k - 1)^2 - 1).

Two independent evaluation paths are provided. The closed form expands f into
its poles and sums every l-series with digamma; the direct path sums the
series up to M terms and adds a rigorous bound on the remainder.
"""

import logging
import math
import threading
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from o2gasket.core.config import settings
from o2gasket.core.exceptions import PreconditionError, TruncationFailureError
from o2gasket.schemas.series import GSequence, SeriesMode, TruncationConfig
from o2gasket.services.series.coefficients import FCoefficients, coefficients_for
from o2gasket.services.series.windows import kernel

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)
PI2 = math.pi * math.pi


@dataclass(frozen=True)
class SeriesValue:
    """A series value with its error estimate and the number of terms used (0 for closed forms)"""
    value: float
    error: float
    terms: int = 0


def nu_closed_form(fc: FCoefficients, ks: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """nu(k) and an error estimate for every k in ``ks``"""
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    alphas = -ks.astype(float) - 1.5
    # alpha + 1 for k is alpha for k - 1, so contiguous windows share evaluations
    lattice, inverse = np.unique(np.concatenate((alphas, alphas + 1.0)), return_inverse=True)
    q, magnitude = fc.pole_series(lattice)
    n = ks.size
    qa, qb = q[inverse[:n]], q[inverse[n:]]
    values = (qa - qb) / PI2 + (ks == 0)
    errors = 64.0 * EPS * (magnitude[inverse[:n]] + magnitude[inverse[n:]]) / PI2 + EPS * (ks == 0)
    return values, errors


def upper_tail_mass(fc: FCoefficients, K: int) -> float:
    """sum_{k > K} nu(k), from the column sums of the kernel"""
    q, _ = fc.pole_series(np.array([-K - 1.5]))
    return float(-q[0] / PI2)


def lower_tail_mass(fc: FCoefficients, K: int) -> float:
    """sum_{k < -K} nu(k)"""
    q, _ = fc.pole_series(np.array([K - 0.5]))
    return float(q[0] / PI2)


def _log_ratio(b: float, M: int) -> float:
    # integral_M^inf dx / (x (x + b))
    if b == 0:
        return 1.0 / M
    return math.log1p(b / M) / b


def _tail_bound(fc: FCoefficients, M: int, k: int) -> float:
    A = abs(fc.leading_coefficient)
    C = (4.0 / 3.0) * fc.curvature
    if M - k - 1 >= 1:
        c = -k - 1
        first, second = _log_ratio(c - 0.5, M), _log_ratio(c + 0.5, M)
        integral = first - second + 4.0 * EPS * (abs(first) + abs(second))
        return (A + C / (M * M)) * max(integral, 0.0)
    # kernel row has total absolute mass 8 and the majorant decreases
    return 8.0 * fc.tail_majorant(M + 1)


def series_tail_bound(g: GSequence, M: int, k: int) -> float:
    """
    Rigorous bound on |sum_{l > M} f_l K_k(l)|.

    Needs M > 2J so that |f_l| <= A/l + (4B/3)/l^3 on the tail, where A is the
    size of the 1/l coefficient and B the pole curvature of f.
    """
    if M < 1 or M <= 2 * g.support:
        raise PreconditionError(f"tail bound needs M > 2J = {2 * g.support}, got M = {M}")
    return _tail_bound(coefficients_for(g), M, k)


class DirectSummation:
    """
    Direct partial sums of the nu series with a growing cache of f_1..f_M.

    The cache only ever grows and is replaced atomically under a lock, so
    concurrent readers always see a consistent array.
    """

    def __init__(self, fc: FCoefficients):
        self.fc = fc
        self._lock = threading.Lock()
        self._f = np.zeros(0)
        self._round = np.zeros(0)

    def prefix(self, M: int) -> Tuple[np.ndarray, np.ndarray]:
        with self._lock:
            if self._f.size < M:
                self._f, self._round = self.fc.window_values(np.arange(1, M + 1))
            return self._f[:M], self._round[:M]

    def partial(self, k: int, M: int) -> Tuple[float, float]:
        """1_{k=0} + (1/pi) sum_{l <= M} f_l K_k(l) and its rounding bound"""
        f, rounding = self.prefix(M)
        weights = kernel(np.arange(1, M + 1), k)
        terms = f * weights
        value = (k == 0) + math.fsum(terms.tolist()) / math.pi
        error = float(np.sum((rounding + EPS * np.abs(f)) * np.abs(weights))) / math.pi + EPS
        return value, error

    def evaluate(self, k: int, cfg: TruncationConfig, min_terms: int) -> SeriesValue:
        M = max(min_terms, 2 * self.fc.support + 1, k + 2)
        M = min(M, cfg.max_terms)
        while True:
            bound = _tail_bound(self.fc, M, k) / math.pi if M > 2 * self.fc.support else math.inf
            if bound <= 0.5 * cfg.target_abs_tol or M >= cfg.max_terms:
                break
            M = min(2 * M, cfg.max_terms)
        if bound > cfg.target_abs_tol:
            raise TruncationFailureError(
                f"direct sum for nu({k}) stalls at tail bound {bound:.3e} with {M} terms",
                achieved=bound,
                terms=M,
            )
        value, rounding = self.partial(k, M)
        return SeriesValue(value=value, error=bound + rounding, terms=M)


_direct_lock = threading.Lock()
_direct: Dict[GSequence, DirectSummation] = {}


def direct_summation_for(g: GSequence) -> DirectSummation:
    with _direct_lock:
        summation = _direct.get(g)
        if summation is None:
            if len(_direct) >= 16:
                _direct.clear()
            summation = _direct[g] = DirectSummation(coefficients_for(g))
        return summation


def nu_value(g: GSequence, k: int, cfg: Optional[TruncationConfig] = None) -> SeriesValue:
    """nu(k) with an error estimate, by the closed form or by direct summation"""
    cfg = cfg or TruncationConfig()
    if cfg.mode == SeriesMode.DIRECT_TRUNCATED:
        return direct_summation_for(g).evaluate(k, cfg, settings.DIRECT_MIN_TERMS)
    values, errors = nu_closed_form(coefficients_for(g), [k])
    return SeriesValue(value=float(values[0]), error=float(errors[0]))


def nu_values(g: GSequence, ks: ArrayLike, cfg: Optional[TruncationConfig] = None) -> np.ndarray:
    cfg = cfg or TruncationConfig()
    if cfg.mode == SeriesMode.DIRECT_TRUNCATED:
        return np.array([nu_value(g, int(k), cfg).value for k in np.atleast_1d(ks)])
    values, _ = nu_closed_form(coefficients_for(g), ks)
    return values
