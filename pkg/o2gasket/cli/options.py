"""
Flags shared by every command and the helpers that turn them into configs
"""

import argparse
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, NoReturn, Optional, Sequence, Tuple

from pydantic import ValidationError

from o2gasket.core.config import settings
from o2gasket.core.exceptions import UsageError
from o2gasket.schemas.series import GSequence, SeriesMode, TruncationConfig
from o2gasket.schemas.walks import WalkConfig
from o2gasket.services.weights.builtins import BuiltinExample, BuiltinFactory, builtin_example
from o2gasket.services.weights.family import WeightFamily
from o2gasket.services.weights.synthesis import synthesize

logger = logging.getLogger(__name__)

MODES = {"digamma": SeriesMode.CLOSED_FORM_DIGAMMA, "direct": SeriesMode.DIRECT_TRUNCATED}

# Flags whose value may start with a minus sign, e.g. --range -2..2
RANGE_FLAGS = frozenset({"--range", "--k-range", "--ell-range", "--table"})


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{message}\n{self.format_usage().strip()}")


def common_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group("shared options")
    group.add_argument(
        "--tol", type=float, default=None,
        help=f"Absolute series tolerance (default: {settings.TARGET_ABS_TOL:g})",
    )
    group.add_argument(
        "--max-terms", type=int, default=None, dest="max_terms",
        help="Largest truncation any series may use",
    )
    group.add_argument("--mode", choices=sorted(MODES), default=None, help="nu evaluation path (default: digamma)")
    group.add_argument(
        "--seed", type=int, default=None,
        help=f"Master seed for Monte Carlo (default: {settings.DEFAULT_SEED})",
    )
    group.add_argument("--workers", type=int, default=None, help="Monte Carlo worker processes")
    group.add_argument("--out", type=Path, default=None, help="Write output here instead of stdout")
    group.add_argument("--format", choices=["json", "csv"], default=None, dest="fmt", help="Output format")
    group.add_argument(
        "--enable-tutte", action="store_true", dest="enable_tutte",
        help="Allow the loop-equation oracle",
    )
    group.add_argument("--log-level", default=None, dest="log_level", help="Log level for stderr")
    return parser


def add_g_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--g", dest="g", help='Ring weights "g1,g2,..." or a builtin name')
    source.add_argument("--g-file", type=Path, dest="g_file", help="File with one ring weight per line")


def parse_range(text: str, flag: str) -> Tuple[int, int]:
    """Inclusive integer range ``a..b``"""
    try:
        start, _, stop = text.partition("..")
        lo, hi = int(start), int(stop) if stop else int(start)
    except ValueError:
        raise UsageError(f"expected a range like 0..10, got {text!r}", flag=flag)
    if hi < lo:
        raise UsageError(f"empty range {text!r}", flag=flag)
    return lo, hi


def attach_range_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--range -2..2`` as ``--range=-2..2`` so argparse keeps the value"""
    out: List[str] = []
    pending = False
    for token in argv:
        if pending and token.startswith("-") and ".." in token:
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
        pending = token in RANGE_FLAGS
    return out


def parse_float_list(text: str, flag: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"expected comma separated numbers, got {text!r}", flag=flag)


def is_builtin(text: Optional[str]) -> bool:
    return text is not None and BuiltinFactory.normalize(text) in BuiltinFactory.BUILTIN_TYPES


def resolve_g(args: argparse.Namespace) -> GSequence:
    if args.g_file is not None:
        try:
            lines = args.g_file.read_text(encoding="utf-8").split()
            return GSequence.from_fractions([Fraction(line) for line in lines])
        except OSError as e:
            raise UsageError(str(e), flag="--g-file")
        except (ValueError, ValidationError) as e:
            raise UsageError(f"invalid ring weights: {e}", flag="--g-file")
    if is_builtin(args.g):
        return BuiltinFactory.ring_sequence(args.g)
    try:
        return GSequence.parse(args.g)
    except (ValueError, ZeroDivisionError, ValidationError) as e:
        raise UsageError(f"invalid ring weights {args.g!r}: {e}", flag="--g")


def resolve_family(args: argparse.Namespace, cfg: TruncationConfig) -> Tuple[GSequence, WeightFamily]:
    """Builtin names map to their registered family, anything else is synthesized"""
    if args.g_file is None and is_builtin(args.g):
        example: BuiltinExample = builtin_example(args.g, cfg)
        return example.g, example.family
    g = resolve_g(args)
    return g, synthesize(g, cfg)


def truncation_config(args: argparse.Namespace) -> TruncationConfig:
    values = {}
    if args.tol is not None:
        values["target_abs_tol"] = args.tol
    if args.max_terms is not None:
        values["max_terms"] = args.max_terms
    if args.mode is not None:
        values["mode"] = MODES[args.mode]
    try:
        return TruncationConfig(**values)
    except ValidationError as e:
        raise UsageError(str(e), flag="--tol/--max-terms")


def walk_config(args: argparse.Namespace) -> WalkConfig:
    values = {
        "master_seed": args.seed,
        "workers": args.workers,
        "n_walks": getattr(args, "n_walks", None),
        "horizon": getattr(args, "horizon", None),
        "support_cut": getattr(args, "support_cut", None),
    }
    try:
        return WalkConfig(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        raise UsageError(str(e), flag="--seed/--workers/--n-walks/--horizon/--support-cut")
