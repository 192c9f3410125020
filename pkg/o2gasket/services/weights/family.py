"""
Weight families of critical O(2) gaskets and their partition functions
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from o2gasket.core.config import settings
from o2gasket.core.exceptions import DegenerateDistributionError, PreconditionError
from o2gasket.schemas.reports import PartitionRow, ValidationReport, WeightFamilyReport
from o2gasket.schemas.series import GSequence
from o2gasket.services.weights.distributions import NuDistribution

logger = logging.getLogger(__name__)

# exp() overflows just above this
LOG_FLOAT_MAX = math.log(np.finfo(float).max)

LOOP_WEIGHT = 2


def _signed_log(x: float) -> tuple:
    if x == 0:
        return -math.inf, 0
    return math.log(abs(x)), (1 if x > 0 else -1)


@dataclass(frozen=True)
class PartitionValue:
    """W^(l), with ``value`` set to None when it overflows and only the log is meaningful"""
    ell: int
    log_value: float
    sign: int
    value: Optional[float]


class WeightFamily:
    """
    Gasket weights q, loop-free face weights q_tilde and the constants c_q and h.

    q and q_tilde are accessors rather than lists since c_q^{1-k} underflows
    quickly; log-scale accessors are provided alongside.
    """

    def __init__(
        self,
        nu: NuDistribution,
        g: Optional[GSequence] = None,
        source: Optional[str] = None,
        unverified_tail: bool = False,
        validation: Optional[ValidationReport] = None,
    ):
        self.nu = nu
        self.g = g if g is not None else nu.g
        self.source = source or nu.source
        self.unverified_tail = unverified_tail
        self.validation = validation
        self.nu_minus_one = nu.value(-1)
        if not self.nu_minus_one > 0:
            raise DegenerateDistributionError(nu.value(0))
        self.c_q = 2.0 / self.nu_minus_one
        self.log_c_q = math.log(self.c_q)
        self.h = 1.0 / self.c_q
        self.n = LOOP_WEIGHT

    def ring_weight(self, k: int) -> float:
        if self.g is not None:
            return self.g.get(k)
        return self.nu.value(k - 1) - self.nu.value(-k - 1)

    def q(self, k: int) -> float:
        """q_k = nu(k - 1) (nu(-1)/2)^{k - 1}"""
        if k < 1:
            raise PreconditionError(f"q_k is defined for k >= 1, got {k}")
        return self.nu.value(k - 1) * math.exp((1 - k) * self.log_c_q)

    def q_log(self, k: int) -> float:
        log_abs, sign = _signed_log(self.nu.value(k - 1))
        return log_abs + (1 - k) * self.log_c_q if sign > 0 else -math.inf

    def q_tilde(self, k: int) -> float:
        """q_tilde_k = g_k (nu(-1)/2)^{k - 1}"""
        if k < 1:
            raise PreconditionError(f"q_tilde_k is defined for k >= 1, got {k}")
        return self.ring_weight(k) * math.exp((1 - k) * self.log_c_q)

    def q_tilde_log(self, k: int) -> Optional[float]:
        weight = self.ring_weight(k)
        if weight <= 0:
            return None
        return math.log(weight) + (1 - k) * self.log_c_q

    def W(self, ell: int) -> PartitionValue:
        return partition_function(self, ell)

    def L_q(self, ell: int) -> float:
        """l^2 nu(-l - 1), equal to 2 l^2 W^(l) / c_q^{l+1}"""
        return ell * ell * self.nu.value(-ell - 1)

    def nu_from_weights(self, k: int) -> float:
        """Rebuild nu(k) from q, W and c_q"""
        if k >= 0:
            q_log = self.q_log(k + 1)
            if q_log == -math.inf:
                return self.q(k + 1) * math.exp(k * self.log_c_q)
            return math.exp(q_log + k * self.log_c_q)
        ell = -k - 1
        w = partition_function(self, ell)
        return w.sign * 2.0 * math.exp(w.log_value - (ell + 1) * self.log_c_q) if w.sign else 0.0

    def to_report(self, window: Optional[int] = None) -> WeightFamilyReport:
        K = settings.NU_JSON_WINDOW if window is None else window
        ks, values = self.nu.window(K)
        nu: Dict[str, float] = {str(int(k)): float(v) for k, v in zip(ks, values)}
        q_log: List[float] = [self.q_log(k) for k in range(1, K + 1)]
        q_tilde_log: List[Optional[float]] = [self.q_tilde_log(k) for k in range(1, K + 1)]
        validation: Dict[str, object] = {"unverified_tail": self.unverified_tail}
        if self.validation is not None:
            validation.update(self.validation.model_dump(mode="json"))
        return WeightFamilyReport(
            source=self.source,
            g=self.g.as_list() if self.g is not None else [],
            c_q=self.c_q,
            h=self.h,
            n=self.n,
            nu=nu,
            q_log=q_log,
            q_tilde_log=q_tilde_log,
            validation=validation,
        )

    def __repr__(self) -> str:
        return f"WeightFamily(source={self.source!r}, c_q={self.c_q!r})"


def partition_function(wf: WeightFamily, ell: int) -> PartitionValue:
    """W^(l) = c_q^{l+1} nu(-l - 1) / 2, in log scale once c_q^{l+1} overflows"""
    if ell < 0:
        raise PreconditionError(f"perimeter half-length must be >= 0, got {ell}")
    if ell == 0:
        return PartitionValue(ell=0, log_value=0.0, sign=1, value=1.0)
    log_abs, sign = _signed_log(wf.nu.value(-ell - 1))
    log_value = (ell + 1) * wf.log_c_q + log_abs - math.log(2.0)
    value: Optional[float] = None
    if log_value < LOG_FLOAT_MAX:
        value = sign * math.exp(log_value)
    return PartitionValue(ell=ell, log_value=log_value, sign=sign, value=value)


def consistency_q_qtilde(wf: WeightFamily, k: int) -> float:
    """q_k - q_tilde_k - n h^{2k} W^(k); vanishes for admissible families"""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    w = partition_function(wf, k)
    loop_term = 0.0
    if w.sign:
        loop_term = wf.n * w.sign * math.exp(w.log_value - 2 * k * wf.log_c_q)
    return wf.q(k) - wf.q_tilde(k) - loop_term


def partition_table(wf: WeightFamily, ells: Iterable[int]) -> List[PartitionRow]:
    """Rows (l, W^(l), log W^(l), L_q(l)); W is left empty once it overflows"""
    rows = []
    for ell in ells:
        w = partition_function(wf, ell)
        rows.append(PartitionRow(ell=ell, W=w.value, log_W=w.log_value, L_q=wf.L_q(ell) if ell > 0 else 0.0))
    return rows
