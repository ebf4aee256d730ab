from datetime import datetime
from typing import Optional
from sqlalchemy import String, Float, ForeignKey, Text
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    """Базовый класс для всех моделей"""
    pass


class CapacityRun(Base):
    """Один запуск расчёта ёмкости (fig2, perm-bound)"""
    __tablename__ = "capacity_runs"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    command: Mapped[str] = mapped_column(String(50), nullable=False, index=True)
    parameters: Mapped[str] = mapped_column(Text, nullable=False)  # JSON с флагами запуска
    tolerance: Mapped[float] = mapped_column(Float, nullable=False)
    converged: Mapped[bool] = mapped_column(default=False, nullable=False)
    created_at: Mapped[datetime] = mapped_column(default=datetime.utcnow, nullable=False)

    # Relationships
    rows: Mapped[list["CapacityRowRecord"]] = relationship(back_populates="run", cascade="all, delete-orphan")

    def __repr__(self) -> str:
        return f"<CapacityRun(id={self.id}, command='{self.command}', converged={self.converged})>"


class CapacityRowRecord(Base):
    """Строка таблицы ёмкости: ключ (θ или ресурс), n, rate"""
    __tablename__ = "capacity_rows"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("capacity_runs.id", ondelete="CASCADE"), nullable=False, index=True)
    key: Mapped[str] = mapped_column(String(50), nullable=False)
    n: Mapped[int] = mapped_column(nullable=False)
    rate: Mapped[float] = mapped_column(Float, nullable=False)
    converged_gap: Mapped[Optional[float]] = mapped_column(Float, nullable=True)

    # Relationships
    run: Mapped["CapacityRun"] = relationship(back_populates="rows")

    def __repr__(self) -> str:
        return f"<CapacityRowRecord(run_id={self.run_id}, key='{self.key}', n={self.n}, rate={self.rate})>"


class SimulationRun(Base):
    """Монте-Карло прогон протокола телепортации"""
    __tablename__ = "simulation_runs"

    id: Mapped[int] = mapped_column(primary_key=True, autoincrement=True)
    seed: Mapped[int] = mapped_column(nullable=False)
    generator: Mapped[str] = mapped_column(String(20), nullable=False)
    trials: Mapped[int] = mapped_column(nullable=False)
    n: Mapped[int] = mapped_column(nullable=False)
    tv_distance: Mapped[float] = mapped_column(Float, nullable=False)
    trace_distance: Mapped[float] = mapped_column(Float, nullable=False)
    report: Mapped[str] = mapped_column(Text, nullable=False)  # JSON SimReport
    created_at: Mapped[datetime] = mapped_column(default=datetime.utcnow, nullable=False)

    def __repr__(self) -> str:
        return f"<SimulationRun(id={self.id}, seed={self.seed}, trials={self.trials})>"
