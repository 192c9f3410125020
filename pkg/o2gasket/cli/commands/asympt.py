"""
asympt: regime classification and slow-variation diagnostics
"""

import argparse
import logging

from o2gasket.cli.options import add_g_arguments, parse_float_list, resolve_family, resolve_g, truncation_config
from o2gasket.core.exceptions import UsageError
from o2gasket.schemas.reports import RegimeReport
from o2gasket.services.asymptotics.regime import bracket_summary, classify_regime

logger = logging.getLogger(__name__)

NAME = "asympt"
HELP = "Classify the tail regime of nu(-k) and sample L(x)"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_g_arguments(parser)
    parser.add_argument("--lambda", type=float, default=None, dest="lam", help="Ratio for L(lambda x) / L(x)")
    parser.add_argument("--x-grid", default=None, dest="x_grid", help="Comma separated grid of x >= 1")
    parser.add_argument("--bracket", action="store_true", help="Include min L_q and max L_q/log l on [1e2, 1e6]")


def default_format(args: argparse.Namespace) -> str:
    return "json"


def run(args: argparse.Namespace) -> RegimeReport:
    cfg = truncation_config(args)
    grid = parse_float_list(args.x_grid, "--x-grid") if args.x_grid is not None else None
    if grid is not None and any(x < 1 for x in grid):
        raise UsageError("grid points must be >= 1", flag="--x-grid")
    if args.lam is not None and args.lam <= 0:
        raise UsageError("lambda must be positive", flag="--lambda")
    g = resolve_g(args)
    report = classify_regime(g, cfg, x_grid=grid, lam=args.lam)
    if args.bracket:
        _, family = resolve_family(args, cfg)
        report = report.model_copy(update={"bracket": bracket_summary(family)})
    return report
