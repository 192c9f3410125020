"""
Classification of the tail regime of nu(-k)
"""

import logging
import math
from typing import Iterable, List, Optional

import numpy as np

from o2gasket.core.config import settings
from o2gasket.core.exceptions import MomentExcessError, PreconditionError
from o2gasket.schemas.reports import BracketSummary, Regime, RegimeReport, SlowVariationSample
from o2gasket.schemas.series import GSequence, TruncationConfig
from o2gasket.services.asymptotics.slow_variation import L_eval, L_tilde_eval
from o2gasket.services.series.coefficients import coefficients_for, f_total
from o2gasket.services.weights.family import WeightFamily

logger = logging.getLogger(__name__)


def diagnostics(
    g: GSequence,
    x_grid: Iterable[float],
    lam: float,
    cfg: Optional[TruncationConfig] = None,
) -> List[SlowVariationSample]:
    samples = []
    for x in x_grid:
        L = L_eval(g, x, cfg)
        samples.append(
            SlowVariationSample(x=x, L=L, L_tilde=L_tilde_eval(g, x, cfg), ratio=L_eval(g, lam * x, cfg) / L)
        )
    return samples


def classify_regime(
    g: GSequence,
    cfg: Optional[TruncationConfig] = None,
    x_grid: Optional[Iterable[float]] = None,
    lam: Optional[float] = None,
) -> RegimeReport:
    """
    drift_deficit when sum_j j g_j < 1, with nu(-k) ~ 2(1 - sum_j j g_j)/pi^2 log k / k^2;
    boundary_summable when the moment is 1 and f is summable, with
    k^2 nu(-k) -> (1/pi) sum_l f_l; boundary_divergent only when the moment is 1 and the
    sequence carries a tail descriptor declaring f non-summable.
    """
    sigma = g.first_moment
    tol = g.moment_tolerance
    if sigma > 1.0 + tol:
        raise MomentExcessError(sigma)
    drift = coefficients_for(g).drift
    grid = list(settings.ASYMPT_X_GRID if x_grid is None else x_grid)
    ratio = settings.ASYMPT_LAMBDA if lam is None else lam
    samples = diagnostics(g, grid, ratio, cfg) if grid else []
    tail_name = g.tail.name if g.tail is not None else None

    if sigma < 1.0 - tol:
        regime, constant = Regime.DRIFT_DEFICIT, 2.0 * (1.0 - sigma) / math.pi**2
    elif g.tail is not None and not g.tail.f_summable:
        regime, constant = Regime.BOUNDARY_DIVERGENT, None
    else:
        # finite support: sum_{j <= l/2} j g_j = 1 for l >= 2J, so f is summable
        regime, constant = Regime.BOUNDARY_SUMMABLE, f_total(g) / math.pi
    logger.info(f"regime {regime.value}: first moment {sigma!r}, constant {constant!r}")
    return RegimeReport(
        first_moment=sigma,
        f_tail_coefficient=2.0 * drift / math.pi,
        regime=regime,
        limit_constant=constant,
        tail=tail_name,
        diagnostics=samples,
    )


def log_grid(ell_min: int, ell_max: int, points: int) -> np.ndarray:
    return np.unique(np.round(np.geomspace(ell_min, ell_max, points)).astype(np.int64))


def bracket_summary(wf: WeightFamily, ell_min: int = 100, ell_max: int = 10**6, points: int = 25) -> BracketSummary:
    """
    min of L_q(l) and max of L_q(l)/log l over a log grid, where
    L_q(l) = l^2 nu(-l - 1) = 2 l^2 W^(l) / c_q^{l+1}.
    """
    if ell_min < 2 or ell_max < ell_min:
        raise PreconditionError(f"need 2 <= ell_min <= ell_max, got {ell_min}, {ell_max}")
    ells = log_grid(ell_min, ell_max, points)
    values = ells.astype(float) ** 2 * wf.nu.values(-ells - 1)
    return BracketSummary(
        ell_min=ell_min,
        ell_max=ell_max,
        lower=float(values.min()),
        upper_over_log=float(np.max(values / np.log(ells))),
    )
