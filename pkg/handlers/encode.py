"""
Encode command handler.
Reads a combinatorial instance and writes the polynomial system it reduces to.
"""

import argparse

from loguru import logger

from config import Config
from modules.plaisted import encode_plaisted
from modules.reductions import (
    boolsys_to_system, cnf_to_boolsys, hhn_to_hn, partition_bounded_system, partition_to_system,
)
from utils.field import FieldCtx
from utils.formats import parse_boolsys, parse_dimacs, parse_partition
from utils.poly import PolySystem
from utils.system_io import read_system, read_text, write_system

EXIT_ERROR = 3


class EncodeHandlers:
    """Handles `encode {boolsys|cnf|partition|partition-bounded|plaisted|affine}`."""

    def __init__(self, config: Config):
        self.config = config

    def encode_command(self, args: argparse.Namespace) -> int:
        """Handle the encode subcommand."""
        try:
            system = self._encode(args.kind, args.input, args.char)
            text = write_system(system, args.output)
            if args.output == "-":
                print(text, end="")
            logger.info(f"✅ Encoded {args.input} as {system.num_polys} polynomials in {system.num_vars} variables")
            return 0
        except (ValueError, OSError) as e:
            logger.error(f"Encoding failed: {e}")
            return EXIT_ERROR

    def _encode(self, kind: str, path: str, char: int) -> PolySystem:
        ctx = FieldCtx(char)
        if kind == "boolsys":
            return boolsys_to_system(parse_boolsys(read_text(path)), ctx)
        if kind == "cnf":
            return boolsys_to_system(cnf_to_boolsys(parse_dimacs(read_text(path))), ctx)
        if kind == "partition":
            return partition_to_system(parse_partition(read_text(path)))
        if kind == "partition-bounded":
            return partition_bounded_system(parse_partition(read_text(path)))
        if kind == "plaisted":
            return encode_plaisted(parse_dimacs(read_text(path)), self.config.MAX_MODULUS, ctx)
        return hhn_to_hn(read_system(path))
