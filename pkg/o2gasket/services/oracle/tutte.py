"""
Loop-equation residual for gasket weight families.

The equation

    W(l) = sum_k q_k W(l + k - 1 + d) + sum_{l1 + l2 = l - 1 + e} W(l1) W(l2)

is checked in the scale of nu, where every term carries the common factor
c_q^{l+1} / 2. The offsets (d, e) are fixed once by calibrating against
the closed-form symmetric family; the oracle refuses to run until that
calibration has passed.
"""

import logging
import math
import threading
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from o2gasket.core.config import settings
from o2gasket.core.exceptions import CalibrationError, PreconditionError
from o2gasket.services.weights.family import LOG_FLOAT_MAX, WeightFamily

logger = logging.getLogger(__name__)

# Offset conventions tried in order
CANDIDATE_OFFSETS: Tuple[Tuple[int, int], ...] = ((0, 0), (-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (1, 1))
CALIBRATION_PERIMETERS = (1, 2, 3, 5)


@dataclass(frozen=True)
class TutteConvention:
    q_offset: int
    split_offset: int


def scaled_residual(wf: WeightFamily, ell: int, truncation: int, convention: TutteConvention) -> float:
    """Residual divided by c_q^{l+1} / 2"""
    d, e = convention.q_offset, convention.split_offset
    c = wf.c_q
    nu = wf.nu
    k = np.arange(1, truncation + 1)
    linear = nu.values(k - 1) * nu.values(-ell - k - d)
    n_split = ell - 1 + e
    if n_split >= 0:
        left = nu.values(-np.arange(0, n_split + 1) - 1)
        quadratic = 0.5 * math.fsum((left * left[::-1]).tolist())
    else:
        quadratic = 0.0
    return nu.value(-ell - 1) - c**d * math.fsum(linear.tolist()) - c**e * quadratic


class TutteOracle:
    """Calibrates the loop-equation convention once and evaluates residuals with it"""

    def __init__(self, truncation: Optional[int] = None, tol: Optional[float] = None):
        self.truncation = truncation or settings.TUTTE_CALIBRATION_TRUNCATION
        self.tol = tol or settings.TUTTE_CALIBRATION_TOL
        self.convention: Optional[TutteConvention] = None
        self.disabled_reason: Optional[str] = None
        self._lock = threading.Lock()

    def calibrate(self, reference: Optional[WeightFamily] = None) -> TutteConvention:
        with self._lock:
            if self.convention is not None:
                return self.convention
            if self.disabled_reason is not None:
                raise CalibrationError(self.disabled_reason)
            if reference is None:
                from o2gasket.services.weights.builtins import builtin_example

                reference = builtin_example("budd_symmetric").family
            attempts = []
            for d, e in CANDIDATE_OFFSETS:
                convention = TutteConvention(q_offset=d, split_offset=e)
                worst = max(
                    abs(scaled_residual(reference, ell, self.truncation, convention)) for ell in CALIBRATION_PERIMETERS
                )
                attempts.append(f"(d={d}, e={e}): {worst:.3e}")
                if worst <= self.tol:
                    logger.info(f"Loop equation calibrated with offsets d={d}, e={e} (residual {worst:.3e})")
                    self.convention = convention
                    return convention
            self.disabled_reason = "no loop-equation convention matches the symmetric family: " + "; ".join(attempts)
            logger.error(f"Tutte oracle disabled: {self.disabled_reason}")
            raise CalibrationError(self.disabled_reason)

    def residual(self, wf: WeightFamily, ell: int, truncation: int) -> float:
        if ell < 1:
            raise PreconditionError(f"loop equation needs l >= 1, got {ell}")
        if truncation < 1:
            raise PreconditionError(f"truncation must be >= 1, got {truncation}")
        convention = self.calibrate()
        scaled = abs(scaled_residual(wf, ell, truncation, convention))
        if scaled == 0.0:
            return 0.0
        log_abs = (ell + 1) * wf.log_c_q - math.log(2.0) + math.log(scaled)
        return math.exp(log_abs) if log_abs < LOG_FLOAT_MAX else math.inf

    def residuals(self, wf: WeightFamily, ells: Sequence[int], truncation: int) -> Tuple[float, ...]:
        return tuple(self.residual(wf, ell, truncation) for ell in ells)


tutte_oracle = TutteOracle()


def tutte_residual(wf: WeightFamily, ell: int, truncation: int, enabled: Optional[bool] = None) -> float:
    """
    |W(l) - sum_{k <= truncation} q_k W(l + k - 1) - sum_{l1 + l2 = l - 1} W(l1) W(l2)|.

    Off unless ``enabled`` (or ENABLE_TUTTE) is set; raises CalibrationError
    when no convention matches the symmetric family.
    """
    enabled = settings.ENABLE_TUTTE if enabled is None else enabled
    if not enabled:
        raise PreconditionError("loop-equation oracle is disabled; pass --enable-tutte")
    return tutte_oracle.residual(wf, ell, truncation)
