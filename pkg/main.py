import asyncio
import logging
import sys
from config.settings import settings
from cli.app import run
from database.database import close_db

# Настройка логирования (stderr, stdout остаётся для артефактов)
logging.basicConfig(
    level=settings.log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


async def main(argv=None) -> int:
    """Точка входа командной строки"""
    try:
        return await run(argv)
    finally:
        await close_db()


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        logger.info("Application interrupted")
        sys.exit(130)
