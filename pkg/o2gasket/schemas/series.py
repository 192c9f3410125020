"""
Pydantic schemas for ring sequences and series truncation settings
"""

import math
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from o2gasket.core.config import settings


class SeriesMode(str, Enum):
    CLOSED_FORM_DIGAMMA = "closed_form_digamma"
    DIRECT_TRUNCATED = "direct_truncated"


# Statement about the part of an infinite ring sequence cut away at registration
class TailDescriptor(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    f_summable: bool = True
    description: Optional[str] = None


class GSequence(BaseModel):
    """
    Finitely supported ring weights g_1, ..., g_J.

    Trailing zeros are stripped on construction so ``support`` is the index of
    the last non-zero entry. ``exact`` marks sequences whose entries are exact
    rationals (affects the tolerance used for the first-moment equality test).
    """

    model_config = ConfigDict(frozen=True)

    entries: Tuple[float, ...] = ()
    exact: bool = False
    tail: Optional[TailDescriptor] = None

    @field_validator("entries", mode="before")
    @classmethod
    def strip_trailing_zeros(cls, v: Sequence[float]) -> Tuple[float, ...]:
        values = [float(x) for x in v]
        while values and values[-1] == 0.0:
            values.pop()
        return tuple(values)

    @field_validator("entries")
    @classmethod
    def check_entries(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        for j, x in enumerate(v, start=1):
            if not math.isfinite(x):
                raise ValueError(f"g_{j} is not finite")
            if x < 0:
                raise ValueError(f"g_{j} = {x!r} is negative")
        return v

    @classmethod
    def zero(cls) -> "GSequence":
        return cls(entries=(), exact=True)

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction]) -> "GSequence":
        return cls(entries=[float(x) for x in values], exact=True)

    @classmethod
    def parse(cls, text: str) -> "GSequence":
        """Parse a comma separated list such as ``"0.25,0.125"``"""
        items = [item.strip() for item in text.split(",") if item.strip()]
        return cls.from_fractions([Fraction(item) for item in items])

    @property
    def support(self) -> int:
        return len(self.entries)

    def get(self, j: int) -> float:
        if 1 <= j <= len(self.entries):
            return self.entries[j - 1]
        return 0.0

    @property
    def first_moment(self) -> float:
        return math.fsum(j * x for j, x in enumerate(self.entries, start=1))

    @property
    def second_moment(self) -> float:
        return math.fsum(j * j * x for j, x in enumerate(self.entries, start=1))

    @property
    def moment_tolerance(self) -> float:
        return settings.EXACT_MOMENT_TOL if self.exact else settings.MOMENT_TOL

    def as_list(self) -> List[float]:
        return list(self.entries)


class TruncationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_abs_tol: float = Field(default_factory=lambda: settings.TARGET_ABS_TOL, gt=0)
    max_terms: int = Field(default_factory=lambda: settings.MAX_TERMS, ge=1)
    mode: SeriesMode = Field(default_factory=lambda: SeriesMode(settings.SERIES_MODE))

    def with_mode(self, mode: SeriesMode) -> "TruncationConfig":
        return self.model_copy(update={"mode": mode})
