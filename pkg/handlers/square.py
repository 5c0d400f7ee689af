"""
Square command handler.
"""

import argparse

from loguru import logger

from config import Config
from models import SquaringPlan
from modules.squaring import ground_field_square, lambda_chain_square, lambda_plan_for, pad_degrees, random_square
from utils.poly import PolySystem
from utils.system_io import read_system, write_system

EXIT_ERROR = 3


class SquareHandlers:
    """Handles `square {random|lambda|ground}`."""

    def __init__(self, config: Config):
        self.config = config

    def square_command(self, args: argparse.Namespace) -> int:
        """Handle the square subcommand."""
        try:
            system = read_system(args.input)
            squared = self._square(args.method, system, args)
            text = write_system(squared, args.output)
            if args.output == "-":
                print(text, end="")
            logger.info(f"✅ Squared {system.num_polys} -> {squared.num_polys} polynomials ({args.method})")
            return 0
        except (ValueError, OSError) as e:
            logger.error(f"Squaring failed: {e}")
            return EXIT_ERROR

    def _square(self, method: str, system: PolySystem, args: argparse.Namespace) -> PolySystem:
        if method == "random":
            plan = SquaringPlan.random(system.ctx, self.config.DEFAULT_SEED, self.config.FIELD_SIZE)
            return random_square(pad_degrees(system), plan, self.config)
        if method == "lambda":
            plan = lambda_plan_for(system, self.config.DEFAULT_LAMBDA, strict=not args.no_strict)
            return lambda_chain_square(system, plan)
        return ground_field_square(system)
