"""
Step distributions nu on the integers
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from o2gasket.schemas.series import GSequence, SeriesMode, TruncationConfig
from o2gasket.services.series.coefficients import FCoefficients, coefficients_for
from o2gasket.services.series.nu import lower_tail_mass, nu_closed_form, nu_values, upper_tail_mass

logger = logging.getLogger(__name__)


class NuDistribution(ABC):
    """Base class for every step distribution"""

    def __init__(self, source: str, g: Optional[GSequence] = None):
        self.source = source
        self.g = g

    @abstractmethod
    def values(self, ks: ArrayLike) -> np.ndarray:
        """nu(k) for every k in ``ks``"""
        pass

    @abstractmethod
    def upper_tail_mass(self, K: int) -> float:
        """sum_{k > K} nu(k)"""
        pass

    @abstractmethod
    def lower_tail_mass(self, K: int) -> float:
        """sum_{k < -K} nu(k)"""
        pass

    def value(self, k: int) -> float:
        return float(self.values(np.array([k]))[0])

    def errors(self, ks: ArrayLike) -> np.ndarray:
        """Evaluation error estimates, zero for closed forms"""
        return np.zeros(np.atleast_1d(ks).shape)

    def tail_mass(self, K: int) -> float:
        """Mass outside [-K, K]"""
        return self.upper_tail_mass(K) + self.lower_tail_mass(K)

    def window(self, K: int) -> Tuple[np.ndarray, np.ndarray]:
        ks = np.arange(-K, K + 1)
        return ks, self.values(ks)

    def ring_weights(self, K: int) -> np.ndarray:
        """g_k = nu(k - 1) - nu(-k - 1) for k = 1..K"""
        k = np.arange(1, K + 1)
        return self.values(k - 1) - self.values(-k - 1)

    def characteristic(self, theta: float) -> Optional[complex]:
        """Closed-form characteristic function when one is known"""
        return None

    @property
    def coefficients(self) -> Optional[FCoefficients]:
        return coefficients_for(self.g) if self.g is not None else None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(source={self.source!r})"


class SeriesNu(NuDistribution):
    """nu synthesized from a finitely supported ring sequence"""

    def __init__(self, g: GSequence, cfg: Optional[TruncationConfig] = None, source: str = "synthesized"):
        super().__init__(source, g)
        self.cfg = cfg or TruncationConfig()

    def values(self, ks: ArrayLike) -> np.ndarray:
        return nu_values(self.g, ks, self.cfg)

    def errors(self, ks: ArrayLike) -> np.ndarray:
        if self.cfg.mode == SeriesMode.DIRECT_TRUNCATED:
            return np.full(np.atleast_1d(ks).shape, self.cfg.target_abs_tol)
        _, errors = nu_closed_form(coefficients_for(self.g), ks)
        return errors

    def upper_tail_mass(self, K: int) -> float:
        return upper_tail_mass(coefficients_for(self.g), K)

    def lower_tail_mass(self, K: int) -> float:
        return lower_tail_mass(coefficients_for(self.g), K)


class SymmetricNu(NuDistribution):
    """nu(k) = 1_{k=0} + (2/pi) / (4k^2 - 1)"""

    def __init__(self, g: Optional[GSequence] = None, source: str = "budd_symmetric"):
        super().__init__(source, g)

    def values(self, ks: ArrayLike) -> np.ndarray:
        k = np.asarray(ks, dtype=float)
        return (2.0 / math.pi) / (4.0 * k * k - 1.0) + (k == 0)

    def upper_tail_mass(self, K: int) -> float:
        return 1.0 / (math.pi * (2 * K + 1))

    def lower_tail_mass(self, K: int) -> float:
        return 1.0 / (math.pi * (2 * K + 1))

    def characteristic(self, theta: float) -> Optional[complex]:
        return complex(1.0 - abs(math.sin(theta / 2.0)))


class TabulatedNu(NuDistribution):
    """Finitely supported nu given as a table"""

    def __init__(self, table: Dict[int, float], source: str = "tabulated"):
        super().__init__(source)
        self.table = dict(table)

    def values(self, ks: ArrayLike) -> np.ndarray:
        return np.array([self.table.get(int(k), 0.0) for k in np.atleast_1d(ks)])

    def upper_tail_mass(self, K: int) -> float:
        return math.fsum(v for k, v in self.table.items() if k > K)

    def lower_tail_mass(self, K: int) -> float:
        return math.fsum(v for k, v in self.table.items() if k < -K)


class PerturbedNu(NuDistribution):
    """A base distribution with finitely many values shifted"""

    def __init__(self, base: NuDistribution, deltas: Dict[int, float]):
        super().__init__(f"{base.source}+perturbed", base.g)
        self.base = base
        self.deltas = dict(deltas)

    def values(self, ks: ArrayLike) -> np.ndarray:
        ks = np.atleast_1d(ks)
        out = np.array(self.base.values(ks), dtype=float)
        for k, delta in self.deltas.items():
            out[ks == k] += delta
        return out

    def upper_tail_mass(self, K: int) -> float:
        return self.base.upper_tail_mass(K) + math.fsum(v for k, v in self.deltas.items() if k > K)

    def lower_tail_mass(self, K: int) -> float:
        return self.base.lower_tail_mass(K) + math.fsum(v for k, v in self.deltas.items() if k < -K)

    @property
    def coefficients(self) -> Optional[FCoefficients]:
        # the perturbation is no longer described by the ring sequence
        return None

    def characteristic(self, theta: float) -> Optional[complex]:
        closed = self.base.characteristic(theta)
        if closed is None:
            return None
        shift = sum(delta * complex(math.cos(k * theta), math.sin(k * theta)) for k, delta in self.deltas.items())
        return closed + shift
