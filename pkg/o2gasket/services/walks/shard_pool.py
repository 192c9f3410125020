"""
Async pool running Monte Carlo shards on worker processes
"""

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from tenacity import AsyncRetrying, RetryCallState, stop_after_attempt, wait_exponential

from o2gasket.core.config import settings
from o2gasket.schemas.reports import LadderStatistics
from o2gasket.schemas.walks import WalkConfig
from o2gasket.services.walks.ladders import shard_plan, simulate_shard
from o2gasket.services.walks.sampler import AliasSampler

logger = logging.getLogger(__name__)


class ShardStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class Shard:
    """One unit of Monte Carlo work"""
    index: int
    name: str
    func: Callable
    args: tuple
    status: ShardStatus = ShardStatus.PENDING
    created_at: datetime = field(default_factory=datetime.utcnow)
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    result: Any = None
    error: Optional[str] = None
    retry_count: int = 0


class ShardPool:
    """
    Runs shards concurrently on an executor and returns their results in
    shard-index order. Failed shards are retried with exponential backoff.
    """

    def __init__(self, max_workers: int = 1, max_retries: Optional[int] = None, backoff: float = 0.5):
        self.max_workers = max_workers
        self.max_retries = settings.SHARD_MAX_RETRIES if max_retries is None else max_retries
        self.backoff = backoff
        self.shards: List[Shard] = []

    def add_shard(self, name: str, func: Callable, *args: Any) -> Shard:
        shard = Shard(index=len(self.shards), name=name, func=func, args=args)
        self.shards.append(shard)
        logger.debug(f"Added shard {shard.index}: {name}")
        return shard

    def get_shards_by_status(self, status: ShardStatus) -> List[Shard]:
        return [shard for shard in self.shards if shard.status == status]

    def _executor(self) -> Executor:
        if self.max_workers > 1:
            return ProcessPoolExecutor(max_workers=self.max_workers)
        return ThreadPoolExecutor(max_workers=1)

    def _log_retry(self, shard: Shard) -> Callable[[RetryCallState], None]:
        def before_sleep(state: RetryCallState) -> None:
            shard.retry_count = state.attempt_number
            error = state.outcome.exception() if state.outcome else None
            shard.error = str(error)
            logger.warning(f"Shard {shard.index} failed: {error} (attempt {state.attempt_number}), retrying")

        return before_sleep

    async def _execute(self, shard: Shard, executor: Executor) -> Any:
        loop = asyncio.get_running_loop()
        shard.status = ShardStatus.RUNNING
        shard.started_at = datetime.utcnow()
        retrying = AsyncRetrying(
            stop=stop_after_attempt(self.max_retries),
            wait=wait_exponential(multiplier=self.backoff, max=8.0),
            before_sleep=self._log_retry(shard),
            reraise=True,
        )
        try:
            async for attempt in retrying:
                with attempt:
                    shard.result = await loop.run_in_executor(executor, shard.func, *shard.args)
        except Exception as e:
            shard.status = ShardStatus.FAILED
            shard.error = str(e)
            shard.completed_at = datetime.utcnow()
            logger.error(f"Shard {shard.index} failed permanently after {self.max_retries} attempts")
            raise
        shard.status = ShardStatus.COMPLETED
        shard.completed_at = datetime.utcnow()
        duration = (shard.completed_at - shard.started_at).total_seconds()
        logger.info(f"Shard {shard.index} completed in {duration:.2f}s")
        return shard.result

    async def run(self) -> List[Any]:
        """Execute every pending shard; results come back in shard order"""
        executor = self._executor()
        try:
            pending = self.get_shards_by_status(ShardStatus.PENDING)
            return list(await asyncio.gather(*(self._execute(shard, executor) for shard in pending)))
        finally:
            executor.shutdown(wait=True)

    def get_stats(self) -> Dict[str, Any]:
        status_counts = {status.value: len(self.get_shards_by_status(status)) for status in ShardStatus}
        return {
            "total_shards": len(self.shards),
            "status_counts": status_counts,
            "retries": sum(shard.retry_count for shard in self.shards),
            "max_workers": self.max_workers,
        }


def merge_statistics(parts: List[LadderStatistics]) -> LadderStatistics:
    """Fold shard statistics in the order given"""
    merged = parts[0]
    for part in parts[1:]:
        merged = merged.merge(part)
    return merged


async def simulate_ladders_async(sampler: AliasSampler, cfg: Optional[WalkConfig] = None) -> LadderStatistics:
    cfg = cfg or WalkConfig()
    seeds = np.random.SeedSequence(cfg.master_seed).spawn(cfg.workers)
    pool = ShardPool(max_workers=cfg.workers)
    for index, (count, seed) in enumerate(zip(shard_plan(cfg.n_walks, cfg.workers), seeds)):
        pool.add_shard(f"ladders-{index}", simulate_shard, sampler, count, cfg.horizon, seed)
    results = await pool.run()
    logger.info(f"Simulated {cfg.n_walks} walks on {cfg.workers} shards: {pool.get_stats()}")
    return merge_statistics(results)


def simulate_ladders(sampler: AliasSampler, cfg: Optional[WalkConfig] = None) -> LadderStatistics:
    """
    First weak ascending and strict descending ladder statistics over
    ``cfg.n_walks`` walks, split into one shard per worker. Each shard owns a
    child of SeedSequence(master_seed), so a run is reproducible for fixed
    (master_seed, workers).
    """
    return asyncio.run(simulate_ladders_async(sampler, cfg))
