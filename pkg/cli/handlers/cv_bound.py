import logging

from cli.arguments import add_output_arguments
from cli.builtins import resolve_medium
from cli.config import RunConfig
from cli.formatters import cv_summary
from gaussian.covariance import cv_capacity_upper
from services.file_service import file_service

logger = logging.getLogger(__name__)

COMMAND = "cv-bound"


def register(subparsers) -> None:
    parser = subparsers.add_parser(COMMAND, help="log-negativity upper bound for a Gaussian teleportation medium")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--builtin", help="epr[:r] | thermal[:nu] | vacuum")
    source.add_argument("--resource-file", help="covariance matrix JSON file")
    parser.add_argument("--n", type=int, help="number of mode pairs for builtin media")
    parser.add_argument("--r-src", type=float, help="squeezing of the regularized source state")
    parser.add_argument("--r-probe", type=float, help="squeezing of the regularized probe state")
    parser.add_argument("--r-medium", type=float, help="squeezing of the builtin EPR medium")
    parser.add_argument("--nu", type=float, help="thermal symplectic value of builtin media")
    add_output_arguments(parser, archive=False)


async def handle(config: RunConfig) -> int:
    medium = resolve_medium(config)
    n = medium.m // 2
    report = cv_capacity_upper(medium, n, config.r_src, config.r_probe)

    data = report.to_dict()
    data["medium"] = config.builtin or str(config.resource_file)
    file_service.write_text(file_service.dumps(data), config.out)
    if config.out:
        print(cv_summary(report), end="")
    return 0
