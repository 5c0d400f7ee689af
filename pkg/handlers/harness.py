"""
Harness command handler.
Runs the equivalence suites and reports disagreements; exit status 1 when any
decided verdict contradicts the ground truth.
"""

import argparse
from typing import List, Tuple

from loguru import logger

from config import Config
from modules.harness import HarnessReport, boolsys_equivalence, partition_equivalence
from utils.field import FieldCtx

EXIT_ERROR = 3


class HarnessHandlers:
    """Handles `harness {equivalence|partition}`."""

    def __init__(self, config: Config):
        self.config = config

    def harness_command(self, args: argparse.Namespace) -> int:
        """Handle the harness subcommand."""
        oracles = [name.strip() for name in args.oracles.split(",") if name.strip()]
        try:
            if args.suite == "equivalence":
                reports = self._boolsys_reports(args, oracles)
            else:
                reports = list(partition_equivalence(
                    args.max_n, args.max_weight, args.samples, args.seed, oracles, self.config,
                ).items())
        except (ValueError, OSError) as e:
            logger.error(f"Harness failed: {e}")
            return EXIT_ERROR

        for title, report in reports:
            print(f"== {title}")
            print(report.render())
        failed = [title for title, report in reports if not report.ok]
        if failed:
            logger.error(f"Disagreements in: {', '.join(failed)}")
            return 1
        return 0

    def _boolsys_reports(self, args: argparse.Namespace, oracles: List[str]) -> List[Tuple[str, HarnessReport]]:
        reports = []
        for char in (int(c) for c in args.chars.split(",") if c.strip()):
            ctx = FieldCtx(char)
            report = boolsys_equivalence(
                ctx, args.max_vars, args.max_equations, oracles, self.config,
                lambda_value=self.config.DEFAULT_LAMBDA, strict=not args.no_strict,
            )
            reports.append((f"boolsys over {ctx}", report))
        return reports
