import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli.config import RunConfig
from cli.handlers import channel_probs, cv_bound, fig2, perm_bound, simulate
from exceptions import QuantumChannelError

logger = logging.getLogger(__name__)

# Коды выхода
EXIT_OK = 0
EXIT_QUALITY = 1
EXIT_INPUT = 2

HANDLERS = {
    channel_probs.COMMAND: channel_probs,
    fig2.COMMAND: fig2,
    cv_bound.COMMAND: cv_bound,
    simulate.COMMAND: simulate,
    perm_bound.COMMAND: perm_bound,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telechannels",
        description="Correlated Pauli and Gaussian channels induced by teleportation media",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in HANDLERS.values():
        module.register(subparsers)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """Флаги, не заданные в командной строке, берут значения по умолчанию из RunConfig"""
    values = {key: value for key, value in vars(args).items() if value is not None}
    if values.get("periodic") is False:
        values.pop("periodic")
    return RunConfig(**values)


async def run(argv: Optional[List[str]] = None) -> int:
    """Разбор флагов, проверка RunConfig и вызов обработчика команды"""
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
    except ValidationError as e:
        print(f"invalid arguments: {e}", file=sys.stderr)
        return EXIT_INPUT

    logger.info("running %s", config.command)
    try:
        code = await HANDLERS[config.command].handle(config)
    except (QuantumChannelError, ValueError) as e:
        logger.error("%s failed: %s", config.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    logger.info("%s finished with exit code %d", config.command, code)
    return code
