"""
Checks of the hypotheses under which nu defines a critical O(2) weight family
"""

import logging
import math
from typing import List, Optional

import numpy as np

from o2gasket.core.config import settings
from o2gasket.core.exceptions import PreconditionError
from o2gasket.schemas.reports import ValidationReport, Verdict
from o2gasket.services.series.windows import h_down_array
from o2gasket.services.weights.distributions import NuDistribution

logger = logging.getLogger(__name__)

# Violations listed individually in a report
MAX_LISTED = 64


def validate_nu(
    nu: NuDistribution,
    depth: Optional[int] = None,
    window: Optional[int] = None,
    tol: Optional[float] = None,
    unverified_tail: bool = False,
) -> ValidationReport:
    """
    Check total mass, h_down-harmonicity at p = 1..depth, the gasket
    inequality nu(k-1) >= nu(-k-1) and non-negativity on [-window, window].

    A single ``tol`` overrides the per-check tolerances from settings.
    Harmonicity sums are truncated at k = window and the truncated part is
    bounded by h_down(p + window + 1) times the upper tail mass.
    """
    P = settings.HARMONICITY_DEPTH if depth is None else depth
    K = settings.VALIDATION_WINDOW if window is None else window
    if P < 1 or K < P:
        raise PreconditionError(f"need depth >= 1 and window >= depth, got depth={P}, window={K}")
    mass_tol = settings.MASS_TOL if tol is None else tol
    harmonic_tol = settings.HARMONICITY_TOL if tol is None else tol
    gasket_tol = settings.GASKET_TOL if tol is None else tol
    negativity_tol = settings.NEGATIVITY_TOL if tol is None else tol

    ks, values = nu.window(K)
    centre = K
    upper = nu.upper_tail_mass(K)
    lower = nu.lower_tail_mass(K)
    mass_residual = math.fsum(values.tolist()) + upper + lower - 1.0
    failed: List[str] = []
    if abs(mass_residual) > mass_tol:
        failed.append("mass")

    h = h_down_array(P + K + 2)
    residuals: List[float] = []
    bounds: List[float] = []
    p0_residual = 0.0
    for p in range(P + 1):
        # k runs over -p..K, so h_down(p + k) runs over h[0..p + K]
        segment = values[centre - p:]
        partial = math.fsum((segment * h[:segment.size]).tolist())
        residual = abs(h[p] - partial)
        bound = h[p + K + 1] * abs(upper)
        if p == 0:
            p0_residual = residual
            continue
        residuals.append(residual)
        bounds.append(bound)
    if any(r - b > harmonic_tol for r, b in zip(residuals, bounds)):
        failed.append("harmonicity")

    # nu(k - 1) - nu(-k - 1) for k = 1..K
    positive_side = values[centre:centre + K]
    negative_side = np.concatenate((values[:centre - 1][::-1], [nu.value(-K - 1)]))
    gasket = positive_side - negative_side
    violating = np.nonzero(gasket < -gasket_tol)[0]
    if violating.size:
        failed.append("gasket")
    gasket_residuals = [float(min(0.0, gasket[i])) for i in violating[:MAX_LISTED]]

    negative = ks[values < -negativity_tol]
    if negative.size:
        failed.append("nonnegativity")

    nu_zero = float(values[centre])
    nu_minus_one = float(values[centre - 1])
    if not (nu_zero < 1.0 - negativity_tol and nu_minus_one > negativity_tol):
        failed.append("nondegenerate")

    report = ValidationReport(
        verdict=Verdict.FAIL if failed else Verdict.PASS,
        failed_checks=failed,
        mass_residual=mass_residual,
        mass_tail_bound=abs(upper) + abs(lower),
        harmonicity_residuals=residuals,
        harmonicity_tail_bounds=bounds,
        harmonicity_p0_residual=p0_residual,
        gasket_residuals=gasket_residuals,
        gasket_min=float(gasket.min()) if gasket.size else 0.0,
        nonneg_violations=[int(x) for x in negative[:MAX_LISTED]],
        nu_zero=nu_zero,
        nu_minus_one=nu_minus_one,
        window=K,
        depth=P,
        tol=harmonic_tol,
        unverified_tail=unverified_tail,
    )
    logger.info(f"validated {nu!r}: {report.verdict.value} {failed}")
    return report
