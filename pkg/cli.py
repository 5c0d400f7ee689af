"""
Command-line surface.
Builds the argparse tree and routes each subcommand to its handler class.
"""

import argparse
import sys
from typing import Callable, Dict, Optional, Sequence

from loguru import logger

from config import Config
from handlers.encode import EncodeHandlers
from handlers.harness import HarnessHandlers
from handlers.square import SquareHandlers
from handlers.verify import VerifyHandlers

EXIT_USAGE = 3


class ToolkitArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_budget_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("budgets")
    group.add_argument("--k-max", type=int, default=8, help="largest extension degree searched (default 8)")
    group.add_argument("--max-candidates", type=int, default=10 ** 7,
                       help="largest number of points enumerated per search (default 10^7)")
    group.add_argument("--max-columns", type=int, default=2000,
                       help="largest Macaulay matrix (default 2000 columns)")
    group.add_argument("--max-modulus", type=int, default=10 ** 6,
                       help="largest Plaisted modulus M (default 10^6)")
    group.add_argument("--workers", type=int, default=1, help="enumeration worker processes (default 1)")


class ToolkitCLI:
    """
    Coordinates the subcommands: encode, square, verify and harness.
    """

    def __init__(self):
        self.parser = self._build_parser()
        self._commands: Dict[str, Callable[[argparse.Namespace], int]] = {}

    def _build_parser(self) -> ToolkitArgumentParser:
        parser = ToolkitArgumentParser(
            prog="resultant-reductions",
            description="Exact reductions to polynomial systems and resultant zero-tests",
        )
        parser.add_argument("--log-level", default="WARNING", help="stderr log level (default WARNING)")
        parser.add_argument("--log-file", default=None, help="also log to this file, rotated daily")
        sub = parser.add_subparsers(dest="command", required=True, parser_class=ToolkitArgumentParser)

        encode = sub.add_parser("encode", help="encode a combinatorial instance as a polynomial system")
        encode.add_argument("kind", choices=["boolsys", "cnf", "partition", "partition-bounded", "plaisted", "affine"])
        encode.add_argument("input", help="input file ('-' for stdin)")
        encode.add_argument("--char", type=int, default=0, help="characteristic of the coefficient field (default 0)")
        encode.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        _add_budget_flags(encode)

        square = sub.add_parser("square", help="square a homogeneous system")
        square.add_argument("method", choices=["random", "lambda", "ground"])
        square.add_argument("input")
        square.add_argument("--seed", type=int, default=0, help="seed for random squaring (default 0)")
        square.add_argument("--lambda", dest="lambda_", type=int, default=None,
                            help="integer lambda for the chain over Q (default 3)")
        square.add_argument("--no-strict", action="store_true", help="allow lambda <= 2 (unsound, for demonstrations)")
        square.add_argument("--field-size", type=int, default=None,
                            help="sampling field size for random squaring (default 4*3^(n+1))")
        square.add_argument("-o", "--output", default="-")
        _add_budget_flags(square)

        verify = sub.add_parser("verify", help="decide whether a system has a nontrivial root")
        verify.add_argument("method", choices=["enumerate", "structured", "sylvester", "macaulay", "auto"])
        verify.add_argument("input")
        verify.add_argument("--ext-degree", type=int, default=None,
                            help="list the roots over F_{p^K} only, instead of the closure search")
        _add_budget_flags(verify)

        harness = sub.add_parser("harness", help="check encoders and squarers against brute force")
        harness.add_argument("suite", choices=["equivalence", "partition"])
        harness.add_argument("--max-vars", type=int, default=2, help="Boolsys variables (default 2)")
        harness.add_argument("--max-equations", type=int, default=3, help="Boolsys equations (default 3)")
        harness.add_argument("--chars", default="0,2,3", help="comma-separated characteristics (default 0,2,3)")
        harness.add_argument("--oracles", default="structured", help="comma-separated oracle names")
        harness.add_argument("--lambda", dest="lambda_", type=int, default=None)
        harness.add_argument("--no-strict", action="store_true")
        harness.add_argument("--max-n", type=int, default=4, help="Partition: exhaustive size (default 4)")
        harness.add_argument("--max-weight", type=int, default=20, help="Partition: largest weight (default 20)")
        harness.add_argument("--samples", type=int, default=0, help="Partition: random instances (default 0)")
        harness.add_argument("--seed", type=int, default=0)
        _add_budget_flags(harness)
        return parser

    def register_handlers(self, config: Config):
        """
        Register all subcommand handlers.

        Args:
            config: Shared configuration
        """
        self._commands["encode"] = EncodeHandlers(config).encode_command
        self._commands["square"] = SquareHandlers(config).square_command
        self._commands["verify"] = VerifyHandlers(config).verify_command
        self._commands["harness"] = HarnessHandlers(config).harness_command
        logger.debug(f"Registered handlers: {', '.join(self._commands)}")

    def parse(self, argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
        return self.parser.parse_args(argv)

    def dispatch(self, args: argparse.Namespace) -> int:
        return self._commands[args.command](args)


def config_from_args(args: argparse.Namespace) -> Config:
    """Config built from whichever flags the subcommand defines."""
    keys = {
        "k_max": "k_max", "max_candidates": "max_candidates", "max_columns": "max_columns",
        "max_modulus": "max_modulus", "workers": "workers", "field_size": "field_size",
        "seed": "seed", "log_level": "log_level", "log_file": "log_file",
    }
    overrides = {key: getattr(args, attr) for key, attr in keys.items() if getattr(args, attr, None) is not None}
    if getattr(args, "lambda_", None) is not None:
        overrides["default_lambda"] = args.lambda_
    return Config(**overrides)
