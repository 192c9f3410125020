"""
Registry of the closed-form example families
"""

import logging
import math
from typing import Callable, Dict, List, NamedTuple, Optional

from o2gasket.core.config import settings
from o2gasket.core.exceptions import PreconditionError
from o2gasket.schemas.series import GSequence, TailDescriptor, TruncationConfig
from o2gasket.services.weights.distributions import NuDistribution, SeriesNu, SymmetricNu
from o2gasket.services.weights.family import WeightFamily

logger = logging.getLogger(__name__)


class BuiltinExample(NamedTuple):
    g: GSequence
    nu: NuDistribution
    family: WeightFamily


def budd_ring_weight(k: int) -> float:
    """2k / (pi (k - 3/2)(k - 1/2)(k + 1/2)(k + 3/2)) + 1_{k=1}"""
    value = 2.0 * k / (math.pi * (k - 1.5) * (k - 0.5) * (k + 0.5) * (k + 1.5))
    return value + (1.0 if k == 1 else 0.0)


def budd_ring_sequence(J: Optional[int] = None) -> GSequence:
    """
    Ring weights of the symmetric example truncated at J.

    The first moment of the full sequence is 1 but its tail beyond J carries
    about 2/(pi J) of it; that deficit is put back on g_J so the truncated
    sequence stays on the boundary sum_j j g_j = 1.
    """
    J = settings.BUDD_TRUNCATION if J is None else J
    if J < 2:
        raise PreconditionError(f"truncation order must be >= 2, got {J}")
    entries = [budd_ring_weight(k) for k in range(1, J + 1)]
    moment = math.fsum(k * x for k, x in enumerate(entries, start=1))
    entries[-1] += (1.0 - moment) / J
    tail = TailDescriptor(
        name="budd_symmetric",
        f_summable=True,
        description=f"g_k ~ 2/(pi k^3) beyond k = {J}, first moment completed on g_{J}",
    )
    return GSequence(entries=entries, exact=False, tail=tail)


def _budd_symmetric(cfg: TruncationConfig) -> BuiltinExample:
    g = budd_ring_sequence()
    nu = SymmetricNu(g)
    return BuiltinExample(g=g, nu=nu, family=WeightFamily(nu, g=g, source="budd_symmetric"))


def _fully_packed(cfg: TruncationConfig) -> BuiltinExample:
    g = GSequence.zero()
    nu = SeriesNu(g, cfg, source="fully_packed")
    return BuiltinExample(g=g, nu=nu, family=WeightFamily(nu, g=g, source="fully_packed"))


class BuiltinFactory:
    """Factory for the registered example families"""

    BUILTIN_TYPES: Dict[str, Callable[[TruncationConfig], BuiltinExample]] = {
        "budd_symmetric": _budd_symmetric,
        "fully_packed": _fully_packed,
    }

    @staticmethod
    def normalize(name: str) -> str:
        return name.strip().lower().replace("-", "_")

    @classmethod
    def create(cls, name: str, cfg: Optional[TruncationConfig] = None) -> BuiltinExample:
        key = cls.normalize(name)
        if key not in cls.BUILTIN_TYPES:
            logger.error(f"Unknown builtin example: {name}")
            raise PreconditionError(f"unknown builtin {name!r}; choose from {cls.get_available_names()}")
        return cls.BUILTIN_TYPES[key](cfg or TruncationConfig())

    @classmethod
    def get_available_names(cls) -> List[str]:
        return list(cls.BUILTIN_TYPES.keys())

    @classmethod
    def ring_sequence(cls, name: str) -> GSequence:
        key = cls.normalize(name)
        if key == "budd_symmetric":
            return budd_ring_sequence()
        if key == "fully_packed":
            return GSequence.zero()
        raise PreconditionError(f"unknown builtin {name!r}; choose from {cls.get_available_names()}")


def builtin_example(name: str, cfg: Optional[TruncationConfig] = None) -> BuiltinExample:
    """(g, nu, family) for ``budd_symmetric`` or ``fully_packed``"""
    return BuiltinFactory.create(name, cfg)
