"""
Monte Carlo estimation of the first ladder heights and epochs
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from o2gasket.schemas.reports import HistogramRow, LadderHistogram, LadderStatistics
from o2gasket.services.series.windows import sqrt_ladder_coeff
from o2gasket.services.walks.sampler import AliasSampler

logger = logging.getLogger(__name__)


def _histogram(values: np.ndarray) -> Dict[int, int]:
    keys, counts = np.unique(values, return_counts=True)
    return {int(k): int(c) for k, c in zip(keys, counts)}


def _ladder(done: np.ndarray, heights: np.ndarray, epochs: np.ndarray) -> LadderHistogram:
    return LadderHistogram(
        heights=_histogram(heights[done]),
        epochs=_histogram(epochs[done]),
        censored=int(np.count_nonzero(~done)),
    )


def simulate_shard(
    sampler: AliasSampler,
    n_walks: int,
    horizon: int,
    seed: np.random.SeedSequence,
) -> LadderStatistics:
    """
    Run ``n_walks`` walks from 0 in lockstep and record, for each, the first
    n >= 1 with S_n >= 0 (weak ascending ladder) and the first n with S_n < 0
    (strict descending ladder, height stored as |S_n|). Walks still missing a
    ladder at ``horizon`` are censored for that ladder.
    """
    rng = np.random.default_rng(seed)
    position = np.zeros(n_walks, dtype=np.int64)
    asc_done = np.zeros(n_walks, dtype=bool)
    desc_done = np.zeros(n_walks, dtype=bool)
    asc_height = np.zeros(n_walks, dtype=np.int64)
    asc_epoch = np.zeros(n_walks, dtype=np.int64)
    desc_height = np.zeros(n_walks, dtype=np.int64)
    desc_epoch = np.zeros(n_walks, dtype=np.int64)
    active = np.arange(n_walks)
    for step in range(1, horizon + 1):
        if active.size == 0:
            break
        position[active] += sampler.draw(rng, active.size)
        s = position[active]

        hit = ~asc_done[active] & (s >= 0)
        idx = active[hit]
        asc_done[idx] = True
        asc_height[idx] = s[hit]
        asc_epoch[idx] = step

        hit = ~desc_done[active] & (s < 0)
        idx = active[hit]
        desc_done[idx] = True
        desc_height[idx] = -s[hit]
        desc_epoch[idx] = step

        active = active[~(asc_done[active] & desc_done[active])]

    return LadderStatistics(
        n_walks=n_walks,
        first_weak_ascending=_ladder(asc_done, asc_height, asc_epoch),
        first_strict_descending=_ladder(desc_done, desc_height, desc_epoch),
        truncated_mass=sampler.truncated_mass,
    )


def shard_plan(n_walks: int, shards: int) -> Tuple[int, ...]:
    """Walk counts per shard; the first n_walks % shards shards take one extra walk"""
    base, extra = divmod(n_walks, shards)
    return tuple(base + (1 if i < extra else 0) for i in range(shards))


def _row(ladder_type: str, value: int, count: int, n: int, expected: Optional[float]) -> HistogramRow:
    z_score = None
    if expected is not None and 0.0 < expected < 1.0:
        z_score = (count - n * expected) / math.sqrt(n * expected * (1.0 - expected))
    return HistogramRow(
        ladder_type=ladder_type, value=value, count=count, expected_probability=expected, z_score=z_score
    )


def histogram_rows(
    stats: LadderStatistics,
    max_value: int = 8,
    ascending_expected: Optional[Sequence[float]] = None,
) -> List[HistogramRow]:
    """
    Height histogram rows with binomial z-scores. Descending heights are
    compared with the universal law [z^k](1 - sqrt(1 - z)); ascending ones
    only when ``ascending_expected`` supplies P(H = 0), P(H = 1), ...
    """
    n = stats.n_walks
    rows = []
    asc = stats.first_weak_ascending.heights
    for value in range(max_value):
        expected = None
        if ascending_expected is not None and value < len(ascending_expected):
            expected = float(ascending_expected[value])
        rows.append(_row("weak_ascending", value, asc.get(value, 0), n, expected))
    desc = stats.first_strict_descending.heights
    for value in range(1, max_value + 1):
        rows.append(_row("strict_descending", value, desc.get(value, 0), n, float(sqrt_ladder_coeff(value))))
    return rows
