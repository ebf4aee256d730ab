from typing import Optional


class QuantumChannelError(Exception):
    """Базовое исключение проекта"""


class SizeLimitError(QuantumChannelError, ValueError):
    """Превышен предел размера для плотного или структурного представления"""

    def __init__(self, what: str, n: int, cutoff: int):
        super().__init__(f"{what}: n={n} exceeds cutoff {cutoff}")
        self.n = n
        self.cutoff = cutoff


class DimensionMismatchError(QuantumChannelError, ValueError):
    """Размерности операндов не согласованы"""


class DomainError(QuantumChannelError, ValueError):
    """Параметр вне области определения"""


class InvariantViolationError(QuantumChannelError, ValueError):
    """Нарушен инвариант; имя инварианта хранится в .invariant"""

    def __init__(self, invariant: str, detail: Optional[str] = None):
        message = f"invariant violated: {invariant}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
        self.invariant = invariant


class DegenerateResourceError(QuantumChannelError, RuntimeError):
    """Вырожденная матрица в гауссовой ветке (M или N необратима)"""


class ResourceFileError(QuantumChannelError, ValueError):
    """Ошибка чтения или разбора файла ресурса"""
