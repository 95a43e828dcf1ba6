import argparse
import asyncio
import sys
from typing import List, Optional

from loguru import logger

from commands.base_command import add_common_arguments, overrides_from
from commands.commands import COMMANDS
from utils.config import Config, RunConfig
from utils.errors import ConfigError, K3mlError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3ml",
        description="Verification harness for m(P_10) = 2 d_3 + (1/9) |det T|^(3/2) L(Y_10, 3) / pi^3",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")
    for command in COMMANDS:
        p = sub.add_parser(command.name, help=command.help, description=command.help)
        command.add_arguments(p)
        add_common_arguments(p)
        p.set_defaults(command_class=command)
    return parser


def setup_logging(run: RunConfig) -> None:
    """stderr sink at the configured level, plus an optional rotating file sink"""
    logger.remove()
    logger.add(sys.stderr, level=run.log_level)
    if run.log_file:
        logger.add(run.log_file, level="DEBUG", rotation="10 MB")


async def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    try:
        config = Config()
        run = config.apply_overrides(**overrides_from(args))
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    setup_logging(run)

    command = args.command_class()
    try:
        return await command.execute(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except K3mlError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(EXIT_FAIL)
