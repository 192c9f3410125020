"""
Pydantic schemas for reports produced by the services
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Regime(str, Enum):
    DRIFT_DEFICIT = "drift_deficit"
    BOUNDARY_SUMMABLE = "boundary_summable"
    BOUNDARY_DIVERGENT = "boundary_divergent"


# Admissibility conditions for a synthesized nu, checked on a finite window
class ValidationReport(BaseModel):
    verdict: Verdict
    failed_checks: List[str] = []
    mass_residual: float
    mass_tail_bound: float
    harmonicity_residuals: List[float]
    harmonicity_tail_bounds: List[float]
    harmonicity_p0_residual: Optional[float] = None
    gasket_residuals: List[float]
    gasket_min: float = 0.0
    nonneg_violations: List[int] = []
    nu_zero: float
    nu_minus_one: float
    window: int
    depth: int
    tol: float
    unverified_tail: bool = False


class SlowVariationSample(BaseModel):
    x: float
    L: float
    L_tilde: float
    ratio: float


class BracketSummary(BaseModel):
    ell_min: int
    ell_max: int
    lower: float
    upper_over_log: float


class RegimeReport(BaseModel):
    first_moment: float
    f_tail_coefficient: float
    regime: Regime
    limit_constant: Optional[float] = None
    tail: Optional[str] = None
    diagnostics: List[SlowVariationSample] = []
    bracket: Optional[BracketSummary] = None

    @model_validator(mode="after")
    def check_constant(self) -> "RegimeReport":
        if self.regime == Regime.BOUNDARY_DIVERGENT:
            if self.limit_constant is not None:
                raise ValueError("boundary_divergent regime carries no limit constant")
        elif self.limit_constant is None or self.limit_constant <= 0:
            raise ValueError(f"{self.regime.value} regime needs a positive limit constant")
        return self


class PartitionRow(BaseModel):
    ell: int
    W: Optional[float] = None
    log_W: float
    L_q: float


class WeightFamilyReport(BaseModel):
    source: str
    g: List[float]
    c_q: float
    h: float
    n: int = 2
    nu: Dict[str, float]
    q_log: List[float]
    q_tilde_log: List[Optional[float]]
    validation: Dict[str, object] = {}


class HistogramRow(BaseModel):
    ladder_type: str
    value: int
    count: int
    expected_probability: Optional[float] = None
    z_score: Optional[float] = None


class LadderHistogram(BaseModel):
    heights: Dict[int, int] = {}
    epochs: Dict[int, int] = {}
    censored: int = 0

    def merge(self, other: "LadderHistogram") -> "LadderHistogram":
        heights = dict(self.heights)
        for k, v in other.heights.items():
            heights[k] = heights.get(k, 0) + v
        epochs = dict(self.epochs)
        for k, v in other.epochs.items():
            epochs[k] = epochs.get(k, 0) + v
        return LadderHistogram(heights=heights, epochs=epochs, censored=self.censored + other.censored)

    @property
    def total(self) -> int:
        return sum(self.heights.values()) + self.censored


class LadderStatistics(BaseModel):
    n_walks: int
    first_weak_ascending: LadderHistogram = Field(default_factory=LadderHistogram)
    first_strict_descending: LadderHistogram = Field(default_factory=LadderHistogram)
    truncated_mass: float = 0.0

    def merge(self, other: "LadderStatistics") -> "LadderStatistics":
        return LadderStatistics(
            n_walks=self.n_walks + other.n_walks,
            first_weak_ascending=self.first_weak_ascending.merge(other.first_weak_ascending),
            first_strict_descending=self.first_strict_descending.merge(other.first_strict_descending),
            truncated_mass=max(self.truncated_mass, other.truncated_mass),
        )

    def probability(self, ladder: str, value: int) -> float:
        hist = self.first_weak_ascending if ladder == "ascending" else self.first_strict_descending
        return hist.heights.get(value, 0) / self.n_walks


class SeriesRow(BaseModel):
    index: int
    value: float
    error: float = 0.0


# Outcome of one brute-force cross-check
class OracleReport(BaseModel):
    check: str
    verdict: Verdict
    residual: float
    bound: float = 0.0
    tolerance: float
    parameters: Dict[str, float] = {}
