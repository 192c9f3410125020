"""
oracle: brute-force cross-checks of the closed forms
"""

import argparse
import logging
import math
from pathlib import Path
from typing import Callable, Dict

import numpy as np

from o2gasket.cli.options import parse_range, resolve_family, resolve_g, truncation_config
from o2gasket.core.config import settings
from o2gasket.core.exceptions import UsageError
from o2gasket.schemas.reports import OracleReport, Verdict
from o2gasket.services.oracle.direct import direct_nu
from o2gasket.services.oracle.tutte import tutte_residual
from o2gasket.services.series.coefficients import coefficients_for
from o2gasket.services.series.nu import nu_closed_form
from o2gasket.services.walks.analytic import pre_renewal_check, wiener_hopf_residual
from o2gasket.services.weights.family import partition_function

logger = logging.getLogger(__name__)

NAME = "oracle"
HELP = "Run a brute-force cross-check"

DEFAULT_TOLERANCES = {
    "direct": 1e-9,
    "wiener-hopf": 1e-6,
    "pre-renewal": 1e-12,
    "tutte": 1e-6,
}


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--check", choices=sorted(DEFAULT_TOLERANCES), required=True, help="Cross-check to run")
    parser.add_argument("--g", dest="g", help='Ring weights "g1,g2,..." or a builtin name')
    parser.add_argument("--g-file", type=Path, dest="g_file", help="File with one ring weight per line")
    parser.add_argument("--check-tol", type=float, default=None, dest="check_tol", help="Pass/fail tolerance")
    parser.add_argument("--k-range", default="-30..30", dest="k_range", help="direct: k range")
    parser.add_argument("--terms", type=int, default=100_000, help="direct: series terms M")
    parser.add_argument("--ladder-terms", type=int, default=10_000, dest="ladder_terms", help="wiener-hopf: N")
    parser.add_argument("--grid-points", type=int, default=64, dest="grid_points", help="wiener-hopf: theta points")
    parser.add_argument("--depth", type=int, default=200, help="pre-renewal: convolution depth D")
    parser.add_argument("--ell-max", type=int, default=20, dest="ell_max", help="pre-renewal: largest l")
    parser.add_argument("--ell-range", default="1..3", dest="ell_range", help="tutte: perimeters")
    parser.add_argument("--truncation", type=int, default=4000, help="tutte: terms of the q sum")


def default_format(args: argparse.Namespace) -> str:
    return "json"


def _require_g(args: argparse.Namespace) -> None:
    if args.g is None and args.g_file is None:
        raise UsageError(f"check {args.check!r} needs ring weights", flag="--g")


def _direct(args: argparse.Namespace) -> OracleReport:
    _require_g(args)
    g = resolve_g(args)
    lo, hi = parse_range(args.k_range, "--k-range")
    ks = np.arange(lo, hi + 1)
    closed, errors = nu_closed_form(coefficients_for(g), ks)
    residual = 0.0
    bound = 0.0
    for k, value, error in zip(ks, closed, errors):
        direct, tail = direct_nu(g, int(k), args.terms)
        residual = max(residual, abs(direct - value))
        bound = max(bound, tail + error)
    return _report(args, residual, bound, {"M": args.terms, "k_min": lo, "k_max": hi})


def _wiener_hopf(args: argparse.Namespace) -> OracleReport:
    _require_g(args)
    g = resolve_g(args)
    grid = np.linspace(0.1, 2.0 * math.pi - 0.1, args.grid_points)
    residual = wiener_hopf_residual(g, grid.tolist(), truncation_config(args), N=args.ladder_terms)
    return _report(args, residual, 0.0, {"N": args.ladder_terms, "points": args.grid_points})


def _pre_renewal(args: argparse.Namespace) -> OracleReport:
    result = pre_renewal_check(args.depth, args.ell_max)
    return _report(args, result.residual, result.omitted_bound, {"D": args.depth, "ell_max": args.ell_max})


def _tutte(args: argparse.Namespace) -> OracleReport:
    _require_g(args)
    if not (args.enable_tutte or settings.ENABLE_TUTTE):
        raise UsageError("the loop-equation oracle is opt-in", flag="--enable-tutte")
    lo, hi = parse_range(args.ell_range, "--ell-range")
    if lo < 1:
        raise UsageError("perimeters start at 1", flag="--ell-range")
    _, family = resolve_family(args, truncation_config(args))
    relative = 0.0
    for ell in range(lo, hi + 1):
        residual = tutte_residual(family, ell, args.truncation, enabled=True)
        w = partition_function(family, ell)
        relative = max(relative, residual / w.value if w.value else math.inf)
    return _report(args, relative, 0.0, {"truncation": args.truncation, "ell_min": lo, "ell_max": hi})


CHECKS: Dict[str, Callable[[argparse.Namespace], OracleReport]] = {
    "direct": _direct,
    "wiener-hopf": _wiener_hopf,
    "pre-renewal": _pre_renewal,
    "tutte": _tutte,
}


def _report(args: argparse.Namespace, residual: float, bound: float, parameters: Dict[str, float]) -> OracleReport:
    tol = DEFAULT_TOLERANCES[args.check] if args.check_tol is None else args.check_tol
    verdict = Verdict.PASS if residual <= bound + tol else Verdict.FAIL
    logger.info(f"oracle {args.check}: residual {residual:.3e}, bound {bound:.3e}, {verdict.value}")
    return OracleReport(
        check=args.check,
        verdict=verdict,
        residual=residual,
        bound=bound,
        tolerance=tol,
        parameters={k: float(v) for k, v in parameters.items()},
    )


def run(args: argparse.Namespace) -> OracleReport:
    return CHECKS[args.check](args)
