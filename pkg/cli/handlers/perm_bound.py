import logging

from capacity.bounds import perm_capacity_bound
from cli.archive import archive_capacity
from cli.arguments import add_output_arguments
from cli.config import RunConfig
from cli.formatters import capacity_summary
from services.file_service import file_service

logger = logging.getLogger(__name__)

COMMAND = "perm-bound"
DEFAULT_N_MAX = 20


def register(subparsers) -> None:
    parser = subparsers.add_parser(COMMAND, help="one-way distillable entanglement bound D1(n)/n of the permutation medium")
    parser.add_argument("--n-min", type=int, help="smallest even n (default 2)")
    parser.add_argument("--n-max", type=int, help=f"largest even n (default {DEFAULT_N_MAX})")
    add_output_arguments(parser)


async def handle(config: RunConfig) -> int:
    """Строки (n, D1(n)/n) по чётным n; код 1, если убывание нарушено"""
    n_min = config.n_min or 2
    n_max = config.n_max or DEFAULT_N_MAX
    n_list = [n for n in range(n_min, n_max + 1) if n % 2 == 0]
    table = perm_capacity_bound(n_list)

    if config.format == "csv":
        text = table.to_csv()
    else:
        text = file_service.dumps({"rows": [[row.n, row.rate] for row in table.rows]})
    file_service.write_text(text, config.out)
    if config.out:
        print(capacity_summary(table), end="")

    if config.archive:
        await archive_capacity(COMMAND, config.model_dump(mode="json"), table)

    rates = [row.rate for row in table.rows]
    if any(later >= earlier for earlier, later in zip(rates, rates[1:])):
        return 1
    return 0
