"""
Main entry point for the reduction toolkit.
Parses the command line, configures logging and runs one subcommand.
"""

import sys
from typing import Optional, Sequence

from loguru import logger

from cli import EXIT_USAGE, ToolkitCLI, config_from_args
from config import Config


def setup_logging(config: Config):
    """
    Configure loguru sinks: stderr at the configured level, plus an optional
    rotated log file.
    """
    logger.remove()
    logger.add(sys.stderr, level=config.LOG_LEVEL)
    if config.LOG_FILE:
        logger.add(config.LOG_FILE, level="DEBUG", rotation="1 day", retention="30 days")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the toolkit.

    Returns:
        Process exit status: 0 satisfiable or success, 1 unsatisfiable or harness
        disagreement, 2 indeterminate, 3 usage or input error
    """
    cli = ToolkitCLI()
    args = cli.parse(argv)

    try:
        config = config_from_args(args)
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    setup_logging(config)
    logger.debug(f"Running {args.command}")

    cli.register_handlers(config)
    return cli.dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
