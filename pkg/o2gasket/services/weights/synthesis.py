"""
Synthesis of a weight family from a ring sequence g
"""

import logging
from typing import Optional

import numpy as np

from o2gasket.core.config import settings
from o2gasket.core.exceptions import DegenerateDistributionError, MomentExcessError, NegativityError
from o2gasket.schemas.series import GSequence, TruncationConfig
from o2gasket.services.series.coefficients import coefficients_for, f_total
from o2gasket.services.weights.distributions import NuDistribution, SeriesNu
from o2gasket.services.weights.family import WeightFamily

logger = logging.getLogger(__name__)


def negativity_window(g: GSequence) -> int:
    return max(settings.NEGATIVITY_WINDOW, 4 * g.support)


def scan_negativity(nu: NuDistribution, window: int, tol: float) -> None:
    """Raise NegativityError for the most negative nu(k) with |k| <= window below -tol"""
    ks, values = nu.window(window)
    worst = int(np.argmin(values))
    if values[worst] < -tol:
        raise NegativityError(int(ks[worst]), float(values[worst]))


def leading_tail_positive(g: GSequence) -> bool:
    """
    Sign of the leading term of nu(-k) as k grows: 1 - sum_j j g_j when that
    is non-zero, otherwise sum_l f_l.
    """
    drift = coefficients_for(g).drift
    if drift > g.moment_tolerance:
        return True
    if abs(drift) <= g.moment_tolerance:
        return f_total(g) > 0
    return False


def synthesize(g: GSequence, cfg: Optional[TruncationConfig] = None, source: str = "synthesized") -> WeightFamily:
    """
    Build nu from g and return the associated weight family.

    nu(0) < 1 and nu(k) >= -tol are verified for |k| <= max(200, 4J); beyond
    that window the sign of nu is read off its leading asymptotic term, and
    the family is flagged ``unverified_tail`` when that term does not settle it.
    """
    cfg = cfg or TruncationConfig()
    tol = settings.NEGATIVITY_TOL
    if g.first_moment > 1.0 + g.moment_tolerance:
        raise MomentExcessError(g.first_moment)
    nu = SeriesNu(g, cfg, source=source)
    nu_zero = nu.value(0)
    if nu_zero >= 1.0 - tol:
        raise DegenerateDistributionError(nu_zero)
    scan_negativity(nu, negativity_window(g), tol)
    unverified = not leading_tail_positive(g)
    if unverified:
        logger.warning(f"sign of nu beyond |k| = {negativity_window(g)} is not settled by its leading term")
    family = WeightFamily(nu, g=g, source=source, unverified_tail=unverified)
    logger.info(f"synthesized {source} family: J={g.support}, c_q={family.c_q:.12g}")
    return family
