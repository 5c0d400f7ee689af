"""
Verify command handler.
Prints the verdict and maps it to the exit status (0 satisfiable, 1 unsatisfiable,
2 indeterminate).
"""

import argparse

from loguru import logger

from config import Config
from models import Verdict, Witness
from modules.harness import decide
from modules.verification import enumerate_projective_roots
from utils.poly import PolySystem
from utils.system_io import read_system

EXIT_ERROR = 3


class VerifyHandlers:
    """Handles `verify {enumerate|structured|sylvester|macaulay|auto}`."""

    def __init__(self, config: Config):
        self.config = config

    def verify_command(self, args: argparse.Namespace) -> int:
        """Handle the verify subcommand."""
        try:
            system = read_system(args.input)
            if args.method == "enumerate" and args.ext_degree is not None:
                verdict = self._roots_at_degree(system, args.ext_degree)
            else:
                verdict = decide(system, args.method, self.config)
        except (ValueError, OSError) as e:
            logger.error(f"Verification failed: {e}")
            return EXIT_ERROR

        print(self.format_verdict(verdict, system))
        logger.info(f"🔍 {args.method}: {verdict.status.value}")
        return verdict.exit_code

    def _roots_at_degree(self, system: PolySystem, k: int) -> Verdict:
        roots = enumerate_projective_roots(system, k, self.config)
        for point in roots:
            print(Witness.plain(point).format(system.var_names))
        if roots:
            return Verdict.satisfiable(Witness.plain(roots[0]), reason=f"{len(roots)} roots at k = {k}")
        return Verdict.indeterminate(f"no roots over the degree-{k} extension")

    @staticmethod
    def format_verdict(verdict: Verdict, system: PolySystem) -> str:
        lines = [verdict.status.value]
        if verdict.reason:
            lines.append(f"reason: {verdict.reason}")
        if verdict.certificate:
            lines.append(f"certificate: {verdict.certificate}")
        for key, value in verdict.details.items():
            lines.append(f"{key}: {value}")
        if verdict.witness is not None:
            lines.append(f"witness over {verdict.witness.ctx}: {verdict.witness.format(system.var_names)}")
        return "\n".join(lines)
