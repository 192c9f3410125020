"""
Pydantic schema for Monte Carlo walk settings
"""

from pydantic import BaseModel, ConfigDict, Field

from o2gasket.core.config import settings


class WalkConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2**64)
    n_walks: int = Field(default_factory=lambda: settings.DEFAULT_N_WALKS, ge=1)
    horizon: int = Field(default_factory=lambda: settings.DEFAULT_HORIZON, ge=1)
    support_cut: int = Field(default_factory=lambda: settings.DEFAULT_SUPPORT_CUT, ge=1)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    mass_limit: float = Field(default_factory=lambda: settings.SUPPORT_MASS_LIMIT, gt=0)
