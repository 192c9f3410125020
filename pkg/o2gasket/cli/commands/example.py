"""
example: closed-form builtin families
"""

import argparse
import logging
from typing import List, Union

from o2gasket.cli.options import parse_range, truncation_config
from o2gasket.schemas.reports import PartitionRow, WeightFamilyReport
from o2gasket.services.weights.builtins import BuiltinFactory, builtin_example
from o2gasket.services.weights.family import partition_table

logger = logging.getLogger(__name__)

NAME = "example"
HELP = "Show a builtin family (budd-symmetric, fully-packed)"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    names = BuiltinFactory.get_available_names()
    parser.add_argument("name", choices=names + [name.replace("_", "-") for name in names], help="Builtin family")
    parser.add_argument("--table", default=None, help="Tabulate W^(l) for l in a..b instead of the family report")
    parser.add_argument("--window", type=int, default=None, help="Half-width of the nu/q listing")


def default_format(args: argparse.Namespace) -> str:
    return "csv" if args.table is not None else "json"


def run(args: argparse.Namespace) -> Union[WeightFamilyReport, List[PartitionRow]]:
    example = builtin_example(args.name, truncation_config(args))
    if args.table is not None:
        lo, hi = parse_range(args.table, "--table")
        return partition_table(example.family, range(max(lo, 0), hi + 1))
    return example.family.to_report(args.window)
