from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from config.settings import numerics, settings

Command = Literal["channel-probs", "fig2", "cv-bound", "simulate", "perm-bound"]
OutputFormat = Literal["json", "csv", "plotdata"]

# Форматы, которые умеет выдавать каждая команда
SUPPORTED_FORMATS = {
    "channel-probs": ("json", "csv"),
    "fig2": ("csv", "plotdata", "json"),
    "cv-bound": ("json",),
    "simulate": ("json",),
    "perm-bound": ("csv", "json"),
}


class RunConfig(BaseModel):
    """Проверенные параметры запуска одной команды"""

    command: Command
    builtin: Optional[str] = None
    resource_file: Optional[Path] = None
    theta: Optional[float] = None
    theta_grid: List[float] = Field(default_factory=lambda: list(numerics.FIG2_THETA_GRID))
    n: Optional[int] = Field(default=None, ge=1)
    n_min: Optional[int] = Field(default=None, ge=1)
    n_max: Optional[int] = Field(default=None, ge=1)
    r_src: float = Field(default=4.0, ge=0.0)
    r_probe: float = Field(default=4.0, ge=0.0)
    nu: float = Field(default=1.0, ge=1.0)
    r_medium: Optional[float] = Field(default=None, ge=0.0)
    input: str = "zero"
    trials: int = Field(default=10_000, ge=1)
    # SQLite INTEGER is signed 64-bit
    seed: int = Field(default=settings.default_seed, ge=0, lt=2 ** 63)
    out: Optional[Path] = None
    format: Optional[OutputFormat] = None
    tolerance: float = Field(default=settings.default_tolerance, gt=0.0)
    periodic: bool = False
    archive: bool = settings.archive_results

    @model_validator(mode="after")
    def check_combination(self):
        supported = SUPPORTED_FORMATS[self.command]
        if self.format is None:
            self.format = supported[0]
        elif self.format not in supported:
            raise ValueError(f"{self.command} supports formats {supported}, got {self.format!r}")
        if self.builtin and self.resource_file:
            raise ValueError("use either --builtin or --resource-file, not both")
        if self.command == "fig2":
            self.n_min = self.n_min or numerics.FIG2_N_MIN
            self.n_max = self.n_max or numerics.FIG2_N_MAX
            if self.n_min >= self.n_max:
                raise ValueError(f"need n_min < n_max, got {self.n_min} and {self.n_max}")
            if self.n_max > numerics.STRUCTURED_CUTOFF:
                raise ValueError(f"n_max={self.n_max} exceeds cutoff {numerics.STRUCTURED_CUTOFF}")
        return self
