import logging
from typing import Any, Dict

from capacity.bounds import CapacityTable
from database.crud import add_capacity_rows, create_capacity_run, create_simulation_run
from database.database import AsyncSessionLocal, init_db
from simulation.teleport import SimReport

logger = logging.getLogger(__name__)


async def archive_capacity(command: str, parameters: Dict[str, Any], table: CapacityTable) -> int:
    """Сохраняет таблицу ёмкости; возвращает id запуска"""
    await init_db()
    async with AsyncSessionLocal() as session:
        run = await create_capacity_run(session, command, parameters, table.tolerance, table.converged())
        count = await add_capacity_rows(session, run.id, table)
    logger.info("archived %s run %d (%d rows)", command, run.id, count)
    return run.id


async def archive_simulation(report: SimReport) -> int:
    await init_db()
    async with AsyncSessionLocal() as session:
        run = await create_simulation_run(session, report)
    logger.info("archived simulation run %d", run.id)
    return run.id
