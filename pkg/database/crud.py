import math
import json
from typing import Any, Dict, List, Optional
from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession
from database.models import CapacityRun, CapacityRowRecord, SimulationRun
from capacity.bounds import CapacityTable
from simulation.teleport import SimReport


# ==================== CAPACITY CRUD ====================

async def create_capacity_run(
    session: AsyncSession,
    command: str,
    parameters: Dict[str, Any],
    tolerance: float,
    converged: bool,
) -> CapacityRun:
    """Создает запись о запуске расчёта ёмкости"""
    run = CapacityRun(
        command=command,
        parameters=json.dumps(parameters, sort_keys=True),
        tolerance=tolerance,
        converged=converged,
    )
    session.add(run)
    await session.commit()
    await session.refresh(run)
    return run


async def add_capacity_rows(session: AsyncSession, run_id: int, table: CapacityTable) -> int:
    """Сохраняет строки таблицы; возвращает число добавленных строк"""
    gaps = table.gaps()
    records = []
    for key, rows in table.groups().items():
        gap = gaps[key]
        for row in rows:
            records.append(CapacityRowRecord(
                run_id=run_id,
                key=str(key),
                n=row.n,
                rate=row.rate,
                converged_gap=None if math.isnan(gap) else gap,
            ))
    session.add_all(records)
    await session.commit()
    return len(records)


async def get_capacity_rows(session: AsyncSession, run_id: int) -> List[CapacityRowRecord]:
    """Строки запуска в порядке добавления"""
    result = await session.execute(
        select(CapacityRowRecord)
        .where(CapacityRowRecord.run_id == run_id)
        .order_by(CapacityRowRecord.id)
    )
    return list(result.scalars().all())


async def get_latest_capacity_run(session: AsyncSession, command: Optional[str] = None) -> Optional[CapacityRun]:
    """Последний запуск (опционально для заданной команды)"""
    query = select(CapacityRun)
    if command:
        query = query.where(CapacityRun.command == command)
    result = await session.execute(query.order_by(CapacityRun.id.desc()).limit(1))
    return result.scalar_one_or_none()


# ==================== SIMULATION CRUD ====================

async def create_simulation_run(session: AsyncSession, report: SimReport) -> SimulationRun:
    """Сохраняет отчёт симуляции"""
    run = SimulationRun(
        seed=report.seed,
        generator=report.generator,
        trials=report.trials,
        n=report.n,
        tv_distance=report.tv_distance,
        trace_distance=report.trace_distance,
        report=json.dumps(report.to_dict(), sort_keys=True),
    )
    session.add(run)
    await session.commit()
    await session.refresh(run)
    return run


async def get_simulation_run(session: AsyncSession, run_id: int) -> Optional[SimulationRun]:
    """Получает прогон по id"""
    result = await session.execute(
        select(SimulationRun).where(SimulationRun.id == run_id)
    )
    return result.scalar_one_or_none()
