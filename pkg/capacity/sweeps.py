import asyncio
import logging
from typing import Iterable

import numpy as np

from capacity.bounds import CapacityTable, check_n_range, phase_gate_rows
from config.settings import settings

logger = logging.getLogger(__name__)


async def sweep_phase_gate_curve(
    thetas: Iterable[float],
    n_min: int,
    n_max: int,
    tolerance: float = settings.default_tolerance,
    periodic: bool = False,
    workers: int = settings.sweep_workers,
) -> CapacityTable:
    """
    Параллельный вариант phase_gate_capacity_curve

    Каждая θ-группа считается в своём потоке (numpy отпускает GIL на
    бабочках fwht); таблица собирается в исходном порядке θ, поэтому
    результат не зависит от планирования.
    """
    check_n_range(n_min, n_max)
    thetas = [float(theta) for theta in thetas]
    semaphore = asyncio.Semaphore(max(1, workers))

    async def run_group(theta: float):
        async with semaphore:
            rows = await asyncio.to_thread(phase_gate_rows, theta, n_min, n_max, periodic)
        logger.info("theta/pi=%.4f done (Q^(%d)=%.6f)", theta / np.pi, n_max, rows[-1].rate)
        return rows

    groups = await asyncio.gather(*(run_group(theta) for theta in thetas))

    table = CapacityTable("theta", tolerance=tolerance)
    for rows in groups:
        table.rows.extend(rows)
    return table
