"""
table: tabulate W^(l), nu(k) or f_l over a range
"""

import argparse
import logging
from typing import List, Union

import numpy as np

from o2gasket.cli.options import add_g_arguments, parse_range, resolve_family, truncation_config
from o2gasket.schemas.reports import PartitionRow, SeriesRow
from o2gasket.services.series.coefficients import f_coeff
from o2gasket.services.weights.family import partition_table

logger = logging.getLogger(__name__)

NAME = "table"
HELP = "Tabulate the partition function, nu or f"

KINDS = ("partition", "nu", "f")


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_g_arguments(parser)
    parser.add_argument("--kind", choices=KINDS, default="partition", help="Quantity to tabulate")
    parser.add_argument("--range", default="0..10", dest="span", help="Inclusive index range a..b")


def default_format(args: argparse.Namespace) -> str:
    return "csv"


def run(args: argparse.Namespace) -> Union[List[PartitionRow], List[SeriesRow]]:
    cfg = truncation_config(args)
    lo, hi = parse_range(args.span, "--range")
    g, family = resolve_family(args, cfg)
    if args.kind == "partition":
        return partition_table(family, range(max(lo, 0), hi + 1))
    if args.kind == "f":
        return [SeriesRow(index=ell, value=f_coeff(g, ell, cfg)) for ell in range(max(lo, 1), hi + 1)]
    ks = np.arange(lo, hi + 1)
    values, errors = family.nu.values(ks), family.nu.errors(ks)
    return [SeriesRow(index=int(k), value=float(v), error=float(e)) for k, v, e in zip(ks, values, errors)]
