import logging

import numpy as np

from capacity.sweeps import sweep_phase_gate_curve
from cli.archive import archive_capacity
from cli.arguments import add_output_arguments, float_list
from cli.config import RunConfig
from cli.formatters import capacity_summary
from config.settings import settings
from services.file_service import file_service

logger = logging.getLogger(__name__)

COMMAND = "fig2"


def register(subparsers) -> None:
    parser = subparsers.add_parser(COMMAND, help="quantum capacity of the phase-gate chain medium versus theta")
    parser.add_argument("--theta-grid", type=float_list, help="theta/pi values, comma separated")
    parser.add_argument("--n-min", type=int)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--periodic", action="store_true")
    add_output_arguments(parser)


async def handle(config: RunConfig) -> int:
    """
    Полная таблица Q^(n) и сокращённая кривая (θ/π, Q при n_max)

    С --out в формате csv рядом пишется <out>.plotdata с кривой.
    Код выхода 1, если хотя бы одна θ не сошлась.
    """
    thetas = [np.pi * x for x in config.theta_grid]
    table = await sweep_phase_gate_curve(
        thetas, config.n_min, config.n_max, config.tolerance, config.periodic, settings.sweep_workers
    )

    if config.format == "csv":
        file_service.write_text(table.to_csv(), config.out)
        if config.out:
            file_service.write_text(table.to_plotdata(), config.out.with_suffix(".plotdata"))
    elif config.format == "plotdata":
        file_service.write_text(table.to_plotdata(), config.out)
    else:
        data = {
            "tolerance": table.tolerance,
            "converged": table.converged(),
            "rows": [[row.key / np.pi, row.n, row.rate] for row in table.rows],
            "curve": [[x, rate] for x, rate in table.curve()],
        }
        file_service.write_text(file_service.dumps(data), config.out)
    if config.out:
        print(capacity_summary(table), end="")

    if config.archive:
        await archive_capacity(COMMAND, config.model_dump(mode="json"), table)

    if not table.converged():
        failing = [f"{key / np.pi:.3g}" for key, gap in table.gaps().items() if not gap < table.tolerance]
        logger.warning("convergence tolerance %.3g not met for theta/pi in %s", table.tolerance, failing)
        return 1
    return 0
