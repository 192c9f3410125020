"""
Configuration settings for the O(2) gasket toolkit
"""

from typing import List, Union

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Base
    VERSION: str = "0.1.0"
    PROJECT_NAME: str = "O(2) Gasket Weights"

    # Series evaluation
    TARGET_ABS_TOL: float = 1e-10
    MAX_TERMS: int = 10_000_000
    SERIES_MODE: str = "closed_form_digamma"
    DIRECT_MIN_TERMS: int = 1024

    # Tolerances
    MOMENT_TOL: float = 1e-9
    EXACT_MOMENT_TOL: float = 1e-12
    MASS_TOL: float = 1e-8
    HARMONICITY_TOL: float = 1e-8
    GASKET_TOL: float = 1e-10
    NEGATIVITY_TOL: float = 1e-10

    # Synthesis and validation
    NEGATIVITY_WINDOW: int = 200
    HARMONICITY_DEPTH: int = 50
    VALIDATION_WINDOW: int = 20_000

    # Serialization
    NU_JSON_WINDOW: int = 64
    FLOAT_DIGITS: int = 17

    # Builtin examples
    BUDD_TRUNCATION: int = 2048

    # Monte Carlo
    DEFAULT_SEED: int = 20240611
    WORKERS: int = 1
    SUPPORT_MASS_LIMIT: float = 1e-3
    DEFAULT_N_WALKS: int = 100_000
    DEFAULT_HORIZON: int = 10_000
    DEFAULT_SUPPORT_CUT: int = 1000
    SHARD_MAX_RETRIES: int = 3

    # Asymptotics
    ASYMPT_LAMBDA: float = 2.0
    ASYMPT_X_GRID: List[float] = [1.0, 10.0, 100.0, 1000.0, 10000.0]

    @field_validator("ASYMPT_X_GRID", mode="before")
    @classmethod
    def assemble_x_grid(cls, v: Union[str, List[float]]) -> Union[List[float], str]:
        if isinstance(v, str) and not v.startswith("["):
            return [float(i.strip()) for i in v.split(",") if i.strip()]
        elif isinstance(v, (list, str)):
            return v
        raise ValueError(v)

    # Oracle
    ENABLE_TUTTE: bool = False
    TUTTE_CALIBRATION_TRUNCATION: int = 4000
    TUTTE_CALIBRATION_TOL: float = 1e-6

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = False

    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env", extra="ignore")


# Create settings instance
settings = Settings()
