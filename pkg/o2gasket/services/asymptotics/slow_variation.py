"""
The slowly varying functions L and L_tilde governing the k^-2 tail of nu(-k)
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from o2gasket.core.exceptions import PreconditionError
from o2gasket.schemas.series import GSequence, SeriesMode, TruncationConfig
from o2gasket.services.series.coefficients import coefficients_for
from o2gasket.services.series.nu import direct_summation_for
from o2gasket.services.series.special import pole_pair_sum

logger = logging.getLogger(__name__)


def L_eval(g: GSequence, x: float, cfg: Optional[TruncationConfig] = None) -> float:
    """
    L(x) = sum_l f_l 4x^2 / (4(l + x - 1)^2 - 1), so that L(k) = pi k^2 nu(-k).

    The closed form splits the kernel into 1/(l + x - 3/2) - 1/(l + x - 1/2)
    and sums each pole of f against it with digamma.
    """
    if x < 1:
        raise PreconditionError(f"L is evaluated at x >= 1, got {x}")
    cfg = cfg or TruncationConfig()
    x = float(x)
    if cfg.mode == SeriesMode.DIRECT_TRUNCATED and x == math.floor(x):
        nu = direct_summation_for(g).evaluate(-int(x), cfg, 1)
        return math.pi * x * x * nu.value
    q, _ = coefficients_for(g).pole_series(np.array([x - 1.5, x - 0.5]))
    return x * x * float(q[0] - q[1]) / math.pi


def L_tilde_eval(g: GSequence, x: float, cfg: Optional[TruncationConfig] = None) -> float:
    """
    L_tilde(x) = sum_l r_l / l * 4x^2 / (4(l + x - 1)^2 - 1) with
    r_l = 1 - sum_{j <= floor(l/2)} j g_j.

    r_l is constant from l = 2J on, so the series is a finite sum plus one
    pole-pair tail.
    """
    if x < 1:
        raise PreconditionError(f"L_tilde is evaluated at x >= 1, got {x}")
    fc = coefficients_for(g)
    x = float(x)
    start = max(2 * g.support, 1)
    ells = np.arange(1, start)
    finite = 0.0
    if ells.size:
        r = np.array([1.0 - fc.moment_upto(int(ell) // 2) for ell in ells])
        a = ells + x - 1.0
        finite = math.fsum((r / ells * 4.0 * x * x / (4.0 * a * a - 1.0)).tolist())
    drift = fc.drift
    tail = 0.0
    if drift != 0.0:
        shift = start - 1
        tail = drift * x * x * (pole_pair_sum(shift, shift + x - 1.5) - pole_pair_sum(shift, shift + x - 0.5))
    return finite + tail


def slow_variation_ratios(
    g: GSequence,
    lam: float,
    x_grid: Sequence[float],
    cfg: Optional[TruncationConfig] = None,
) -> List[float]:
    """L(lam x) / L(x) along the grid"""
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    if any(x < 1 for x in x_grid) or any(lam * x < 1 for x in x_grid):
        raise PreconditionError("grid points and their images must be >= 1")
    return [L_eval(g, lam * x, cfg) / L_eval(g, x, cfg) for x in x_grid]
