import logging

import numpy as np

from cli.archive import archive_simulation
from cli.arguments import add_output_arguments, add_resource_arguments
from cli.builtins import resolve_resource
from cli.config import RunConfig
from cli.formatters import simulation_summary
from pauli.sampling import named_input_state
from services.file_service import file_service
from simulation.teleport import simulate_teleportation

logger = logging.getLogger(__name__)

COMMAND = "simulate"


def register(subparsers) -> None:
    parser = subparsers.add_parser(COMMAND, help="Monte-Carlo run of the teleportation protocol")
    add_resource_arguments(parser)
    parser.add_argument("--input", help="zero | one | plus | minus | maximally-mixed | mixed:<q> | random")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    add_output_arguments(parser)


async def handle(config: RunConfig) -> int:
    """
    SimReport в JSON

    Код 1, если частоты меток ошибки отклоняются от p_k больше чем на 5/√trials.
    """
    resource = resolve_resource(config)
    rho_in = named_input_state(config.input, resource.n, np.random.default_rng(config.seed))
    report = simulate_teleportation(resource, rho_in, config.trials, config.seed)

    file_service.write_text(file_service.dumps(report.to_dict()), config.out)
    if config.out:
        print(simulation_summary(report), end="")

    if config.archive:
        await archive_simulation(report)

    limit = 5.0 / np.sqrt(config.trials)
    if report.tv_distance > limit:
        logger.warning("tv distance %.4g exceeds %.4g", report.tv_distance, limit)
        return 1
    return 0
