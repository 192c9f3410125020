"""
synth: build the weight family of a ring sequence
"""

import argparse
import logging

from o2gasket.cli.options import add_g_arguments, resolve_g, truncation_config
from o2gasket.schemas.reports import WeightFamilyReport
from o2gasket.services.weights.synthesis import synthesize
from o2gasket.services.weights.validation import validate_nu

logger = logging.getLogger(__name__)

NAME = "synth"
HELP = "Synthesize nu, q, q_tilde and c_q from ring weights g"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_g_arguments(parser)
    parser.add_argument("--window", type=int, default=None, help="Half-width of the nu/q listing")
    parser.add_argument("--validate", action="store_true", help="Attach a validation report")


def default_format(args: argparse.Namespace) -> str:
    return "json"


def run(args: argparse.Namespace) -> WeightFamilyReport:
    cfg = truncation_config(args)
    g = resolve_g(args)
    family = synthesize(g, cfg)
    if args.validate:
        family.validation = validate_nu(family.nu, unverified_tail=family.unverified_tail)
    return family.to_report(args.window)
