"""
Walker's alias method over a truncated step distribution.

O(n) preprocessing, O(1) per draw.
"""

import logging
from typing import Optional

import numpy as np

from o2gasket.core.exceptions import SupportTruncationError
from o2gasket.schemas.walks import WalkConfig
from o2gasket.services.weights.distributions import NuDistribution

logger = logging.getLogger(__name__)


class AliasSampler:
    """Sampler for a distribution on ``support`` with the given probabilities"""

    def __init__(self, support: np.ndarray, probabilities: np.ndarray, truncated_mass: float = 0.0):
        self.support = np.asarray(support, dtype=np.int64)
        self.truncated_mass = truncated_mass
        n = self.support.size
        scaled = np.asarray(probabilities, dtype=float) * (n / np.sum(probabilities))
        self.prob = np.ones(n)
        self.alias = np.arange(n)
        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            big = large[-1]
            self.prob[s] = scaled[s]
            self.alias[s] = big
            scaled[big] -= 1.0 - scaled[s]
            if scaled[big] < 1.0:
                large.pop()
                small.append(big)
        # leftovers are 1 up to rounding
        for i in small + large:
            self.prob[i] = 1.0

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        column = rng.integers(0, self.support.size, size=size)
        accept = rng.random(size) < self.prob[column]
        return self.support[np.where(accept, column, self.alias[column])]

    def probabilities(self) -> np.ndarray:
        """Probabilities implied by the alias table"""
        n = self.support.size
        out = self.prob / n
        np.add.at(out, self.alias, (1.0 - self.prob) / n)
        return out


def build_sampler(nu: NuDistribution, cfg: Optional[WalkConfig] = None) -> AliasSampler:
    """
    Alias sampler for nu restricted to [-K, K] and renormalized.

    Raises SupportTruncationError when the mass outside the window exceeds
    the configured limit.
    """
    cfg = cfg or WalkConfig()
    K = cfg.support_cut
    truncated = nu.tail_mass(K)
    ks, values = nu.window(K)
    clipped = np.clip(values, 0.0, None)
    truncated += float(np.sum(clipped - values))
    if truncated > cfg.mass_limit:
        raise SupportTruncationError(truncated, cfg.mass_limit)
    logger.debug(f"sampler for {nu!r} on [-{K}, {K}], truncated mass {truncated:.3e}")
    return AliasSampler(ks, clipped, truncated_mass=truncated)
