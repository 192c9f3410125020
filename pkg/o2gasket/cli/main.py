"""
Command-line dispatcher
"""

import logging
import sys
from types import ModuleType
from typing import Dict, List, Optional, Sequence

from o2gasket import __version__
from o2gasket.cli.commands import asympt, example, oracle, synth, table, validate, walk
from o2gasket.cli.options import ArgumentParser, attach_range_values, common_parser
from o2gasket.cli.output import emit_report, write_output
from o2gasket.core.exceptions import O2GasketError, UsageError
from o2gasket.core.logging import setup_logging
from o2gasket.schemas.reports import Verdict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

COMMANDS: Dict[str, ModuleType] = {
    module.NAME: module for module in (synth, validate, table, asympt, walk, oracle, example)
}


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="o2", description="Critical O(2) loop-decorated planar map weight sequences")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command", parser_class=ArgumentParser)
    subparsers.required = True
    shared = common_parser()
    for name, module in COMMANDS.items():
        sub = subparsers.add_parser(name, help=module.HELP, description=module.HELP, parents=[shared])
        module.add_arguments(sub)
    return parser


def _failed(report: object) -> bool:
    return getattr(report, "verdict", None) == Verdict.FAIL


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; 0 on success, 1 on a validation failure, 2 on a usage error"""
    parser = build_parser()
    try:
        args = parser.parse_args(attach_range_values(sys.argv[1:] if argv is None else argv))
    except UsageError as e:
        sys.stderr.write(f"o2: error: {e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    setup_logging(args.log_level)
    module = COMMANDS[args.command]
    try:
        report = module.run(args)
        text = emit_report(report, args.fmt or module.default_format(args))
        write_output(text, args.out)
    except UsageError as e:
        sys.stderr.write(f"o2 {args.command}: error: {e}\n")
        return EXIT_USAGE
    except O2GasketError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return EXIT_VALIDATION
    if _failed(report):
        logger.warning(f"{args.command}: verdict fail")
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(dispatch(argv))
