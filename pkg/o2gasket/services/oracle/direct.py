"""
Direct truncated summation of nu, the oracle for the digamma closed form
"""

import logging
import math
from typing import Tuple

from o2gasket.core.exceptions import PreconditionError
from o2gasket.schemas.series import GSequence
from o2gasket.services.series.nu import direct_summation_for, series_tail_bound

logger = logging.getLogger(__name__)


def direct_nu(g: GSequence, k: int, M: int) -> Tuple[float, float]:
    """
    1_{k=0} + (1/pi) sum_{l=1}^{M} f_l 4 / (4(l - k - 1)^2 - 1) with f_l taken
    from the half-harmonic windows, and a bound on everything left out
    (series tail plus rounding).
    """
    if M <= 2 * g.support:
        raise PreconditionError(f"direct summation needs M > 2J = {2 * g.support}, got M = {M}")
    value, rounding = direct_summation_for(g).partial(k, M)
    tail = series_tail_bound(g, M, k) / math.pi
    logger.debug(f"direct nu({k}) with M={M}: tail {tail:.3e}, rounding {rounding:.3e}")
    return value, tail + rounding
