from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Tuple


class Settings(BaseSettings):
    """Основные настройки приложения"""

    # Results archive
    database_url: str = "sqlite+aiosqlite:///./results.db"
    archive_results: bool = False

    # Logging
    log_level: str = "INFO"

    # Run defaults
    default_seed: int = 20090101
    default_tolerance: float = 1e-3
    sweep_workers: int = 4

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False
    )


class NumericsConfig:
    """Численные константы и пределы размеров"""

    # Dense cutoffs: 2^n-dim operators, 4^n-dim (2n-qubit) media, 8^n-dim X⊗A⊗B space
    DENSE_QUBIT_CUTOFF = 12
    DENSE_PAIR_CUTOFF = 3
    ENVIRONMENT_PAIR_CUTOFF = 2
    # Z-sector vectors of length 2^n (the fig2 sweep goes up to n=23)
    STRUCTURED_CUTOFF = 26
    # Dense probability vectors over 4^n words
    DENSE_PROBS_CUTOFF = 12
    # n! dense terms
    PERMUTATION_CUTOFF = 3
    # O(4^n) brute-force oracle
    BRUTE_FORCE_CUTOFF = 10

    # Tolerances
    ATOL = 1e-10
    PROB_SUM_TOL = 1e-12
    CLAMP = 1e-14
    CM_SYMMETRY_TOL = 1e-10
    CM_PHYSICAL_TOL = 1e-8
    SYMPLECTIC_PAIRING_TOL = 1e-8

    # fig2 defaults (θ/π grid, n range)
    FIG2_THETA_GRID: Tuple[float, ...] = tuple(round(0.1 * i, 1) for i in range(11))
    FIG2_N_MIN = 10
    FIG2_N_MAX = 23

    # CSV/plot float formatting
    FLOAT_FORMAT = "{:.12g}"

    @classmethod
    def format_float(cls, value: float) -> str:
        """Форматирует число с 12 значащими цифрами, без зависимости от локали"""
        return cls.FLOAT_FORMAT.format(float(value))


# Глобальный экземпляр настроек
settings = Settings()
numerics = NumericsConfig()
