"""
walk: Monte Carlo ladder statistics
"""

import argparse
import logging
from typing import List, Optional, Union

from o2gasket.cli.options import add_g_arguments, resolve_family, truncation_config, walk_config
from o2gasket.core.exceptions import LadderAnomalyError
from o2gasket.schemas.reports import HistogramRow, LadderStatistics
from o2gasket.schemas.series import GSequence
from o2gasket.services.walks.analytic import asc_ladder_series
from o2gasket.services.walks.ladders import histogram_rows
from o2gasket.services.walks.sampler import build_sampler
from o2gasket.services.walks.shard_pool import simulate_ladders

logger = logging.getLogger(__name__)

NAME = "walk"
HELP = "Simulate first ladder heights and epochs"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_g_arguments(parser)
    parser.add_argument("--n-walks", type=int, default=None, dest="n_walks", help="Number of walks")
    parser.add_argument("--horizon", type=int, default=None, help="Steps before a walk is censored")
    parser.add_argument("--support-cut", type=int, default=None, dest="support_cut", help="Sample nu on [-K, K]")
    parser.add_argument("--max-height", type=int, default=8, dest="max_height", help="Heights listed in CSV output")


def default_format(args: argparse.Namespace) -> str:
    return "json"


def _ascending_law(g: GSequence, n: int) -> Optional[List[float]]:
    try:
        return asc_ladder_series(g, n).tolist()
    except LadderAnomalyError as e:
        logger.warning(f"no ascending ladder law to compare against: {e}")
        return None


def run(args: argparse.Namespace) -> Union[LadderStatistics, List[HistogramRow]]:
    cfg = truncation_config(args)
    wcfg = walk_config(args)
    g, family = resolve_family(args, cfg)
    sampler = build_sampler(family.nu, wcfg)
    stats = simulate_ladders(sampler, wcfg)
    if (args.fmt or default_format(args)) == "csv":
        return histogram_rows(stats, args.max_height, _ascending_law(g, args.max_height))
    return stats
