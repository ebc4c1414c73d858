"""Application configuration via environment variables."""

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    model_config = {"env_prefix": "PSLAB_", "env_file": ".env", "extra": "ignore"}

    # Output
    output_dir: str = "results"

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    # Parallelism (joblib threads for restarts, sweeps and τ nodes)
    threads: int = Field(default=1, ge=1, le=256)

    # Default grid shared by all scenarios
    default_n: int = Field(default=512, ge=16)
    default_dt: float = Field(default=1 / 16, gt=0)
    default_seed: int = 1

    # Boundary guard: tail energy fraction and packet clearance in widths
    guard_fraction: float = Field(default=1e-12, gt=0, lt=1)
    guard_widths: float = Field(default=6.0, gt=0)

    # Born–Jordan τ-quadrature
    bj_nodes: int = Field(default=16, ge=8)
    bj_tol: float = Field(default=1e-6, gt=0)

    # Surviving-pair classifier: bound threshold in cell diameters
    bound_threshold_cells: float = Field(default=10.0, gt=0)

    # Samples per fringe period when a sweep pads the lag window
    fringe_samples: int = Field(default=128, ge=8)


settings = Settings()
