from typing import Optional
from sqlalchemy.ext.asyncio import AsyncEngine, create_async_engine, AsyncSession, async_sessionmaker
from sqlalchemy.pool import NullPool
from config.settings import settings
from database.models import Base


def make_engine(url: str) -> AsyncEngine:
    """Асинхронный движок для произвольного URL (тесты используют in-memory SQLite)"""
    return create_async_engine(
        url,
        echo=False,  # Если True - будет логировать все SQL запросы (полезно для отладки)
        poolclass=NullPool,  # Для SQLite рекомендуется NullPool
    )


# Создаем асинхронный движок БД
engine = make_engine(settings.database_url)

# Фабрика для создания сессий
AsyncSessionLocal = async_sessionmaker(
    engine,
    class_=AsyncSession,
    expire_on_commit=False,  # Объекты остаются доступны после commit
)


async def init_db(target: Optional[AsyncEngine] = None):
    """Инициализация базы данных - создание всех таблиц"""
    async with (target or engine).begin() as conn:
        await conn.run_sync(Base.metadata.create_all)


async def close_db(target: Optional[AsyncEngine] = None):
    """Закрытие соединений с БД при завершении приложения"""
    await (target or engine).dispose()
