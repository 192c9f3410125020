"""
validate: check mass, harmonicity, gasket inequality and sign of nu
"""

import argparse
import logging

from o2gasket.cli.options import add_g_arguments, resolve_family, truncation_config
from o2gasket.schemas.reports import ValidationReport
from o2gasket.services.weights.validation import validate_nu

logger = logging.getLogger(__name__)

NAME = "validate"
HELP = "Validate the step distribution of a ring sequence or builtin"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_g_arguments(parser)
    parser.add_argument("--depth", type=int, default=None, help="Harmonicity is checked for p = 1..depth")
    parser.add_argument("--window", type=int, default=None, help="nu is summed over [-window, window]")


def default_format(args: argparse.Namespace) -> str:
    return "json"


def run(args: argparse.Namespace) -> ValidationReport:
    cfg = truncation_config(args)
    _, family = resolve_family(args, cfg)
    report = validate_nu(family.nu, depth=args.depth, window=args.window, unverified_tail=family.unverified_tail)
    logger.info(f"validation verdict for {family.source}: {report.verdict.value}")
    return report
