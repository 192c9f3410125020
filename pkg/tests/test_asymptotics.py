"""
Tests for the tail asymptotics of nu
"""

import math

import pytest

from o2gasket.core.exceptions import MomentExcessError, PreconditionError
from o2gasket.schemas.reports import Regime
from o2gasket.schemas.series import GSequence, SeriesMode, TailDescriptor, TruncationConfig
from o2gasket.services.asymptotics.regime import bracket_summary, classify_regime, log_grid
from o2gasket.services.asymptotics.slow_variation import L_eval, L_tilde_eval, slow_variation_ratios
from o2gasket.services.series.nu import nu_value

FULLY_PACKED_CONSTANT = 2 / math.pi**2
BUDD_CONSTANT = 1 / (2 * math.pi)


class TestTail:
    def test_fully_packed_log_correction(self, zero_g):
        k = 10**6
        scaled = k * k * nu_value(zero_g, -k).value / math.log(k)
        assert scaled == pytest.approx(FULLY_PACKED_CONSTANT, rel=1e-2)

    def test_budd_constant(self, budd_g):
        k = 10**5
        assert k * k * nu_value(budd_g, -k).value == pytest.approx(BUDD_CONSTANT, rel=1e-2)

    def test_L_matches_nu(self, random_g):
        for k in (1, 7, 300):
            assert L_eval(random_g, k) == pytest.approx(math.pi * k * k * nu_value(random_g, -k).value, rel=1e-10)

    def test_L_direct_mode(self, zero_g):
        cfg = TruncationConfig(mode=SeriesMode.DIRECT_TRUNCATED, target_abs_tol=1e-12)
        assert L_eval(zero_g, 100, cfg) == pytest.approx(L_eval(zero_g, 100), rel=1e-6)

    def test_L_tilde_tracks_L(self, zero_g, random_g):
        for g in (zero_g, random_g):
            gap = [L_eval(g, x) - (2 / math.pi) * L_tilde_eval(g, x) for x in (1e3, 1e5)]
            assert abs(gap[0]) < 1.0
            assert abs(gap[1] - gap[0]) < 1e-2

    def test_L_tilde_fully_packed_grows_like_log(self, zero_g):
        assert L_tilde_eval(zero_g, 1e6) / math.log(1e6) == pytest.approx(1.0, rel=0.1)

    def test_domain(self, zero_g):
        with pytest.raises(PreconditionError):
            L_eval(zero_g, 0.5)
        with pytest.raises(PreconditionError):
            L_tilde_eval(zero_g, 0.0)


class TestSlowVariation:
    grid = [10.0, 100.0, 1000.0, 10000.0]

    def test_fully_packed_ratios_decrease(self, zero_g):
        ratios = slow_variation_ratios(zero_g, 2.0, self.grid)
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert 1.0 < ratios[-1] < 1.1

    def test_budd_ratios_near_one(self, budd_g):
        for ratio in slow_variation_ratios(budd_g, 2.0, self.grid):
            assert abs(ratio - 1.0) < 5e-3

    def test_preconditions(self, zero_g):
        with pytest.raises(PreconditionError):
            slow_variation_ratios(zero_g, 0.0, self.grid)
        with pytest.raises(PreconditionError):
            slow_variation_ratios(zero_g, 0.5, [1.0])


class TestClassifyRegime:
    def test_drift_deficit(self, zero_g):
        report = classify_regime(zero_g, x_grid=[])
        assert report.regime == Regime.DRIFT_DEFICIT
        assert report.limit_constant == pytest.approx(FULLY_PACKED_CONSTANT, rel=1e-14)
        assert report.f_tail_coefficient == pytest.approx(2 / math.pi, rel=1e-14)
        assert report.diagnostics == []

    def test_drift_deficit_scales_with_moment(self):
        report = classify_regime(GSequence.parse("0.25"), x_grid=[])
        assert report.limit_constant == pytest.approx(1.5 / math.pi**2, rel=1e-14)

    def test_boundary_summable(self, half_g):
        report = classify_regime(half_g, x_grid=[])
        assert report.regime == Regime.BOUNDARY_SUMMABLE
        assert report.limit_constant == pytest.approx(4 / (3 * math.pi**2), rel=1e-12)

    def test_budd(self, budd_g):
        report = classify_regime(budd_g, x_grid=[])
        assert report.regime == Regime.BOUNDARY_SUMMABLE
        assert report.limit_constant == pytest.approx(BUDD_CONSTANT, rel=2e-3)
        assert report.tail == "budd_symmetric"

    def test_boundary_divergent_needs_descriptor(self):
        tail = TailDescriptor(name="heavy", f_summable=False)
        g = GSequence(entries=[0.0, 0.5], exact=True, tail=tail)
        report = classify_regime(g, x_grid=[])
        assert report.regime == Regime.BOUNDARY_DIVERGENT
        assert report.limit_constant is None
        assert report.tail == "heavy"

    def test_descriptor_ignored_below_moment_one(self):
        tail = TailDescriptor(name="heavy", f_summable=False)
        g = GSequence(entries=[0.1], exact=True, tail=tail)
        report = classify_regime(g, x_grid=[])
        assert report.regime == Regime.DRIFT_DEFICIT
        assert report.limit_constant == pytest.approx(1.8 / math.pi**2, rel=1e-14)
        assert report.tail == "heavy"

    def test_moment_excess(self):
        with pytest.raises(MomentExcessError):
            classify_regime(GSequence.parse("1.01"))

    def test_diagnostics(self, zero_g):
        report = classify_regime(zero_g, x_grid=[10.0, 100.0], lam=3.0)
        assert [s.x for s in report.diagnostics] == [10.0, 100.0]
        ratios = slow_variation_ratios(zero_g, 3.0, [10.0, 100.0])
        for sample, ratio in zip(report.diagnostics, ratios):
            assert sample.ratio == pytest.approx(ratio, rel=1e-14)
            assert sample.L == pytest.approx(L_eval(zero_g, sample.x), rel=1e-14)

    def test_default_grid(self, half_g):
        assert len(classify_regime(half_g).diagnostics) == 5


class TestBracket:
    def test_log_grid(self):
        grid = log_grid(100, 10**6, 25)
        assert grid[0] == 100
        assert grid[-1] == 10**6
        assert all(a < b for a, b in zip(grid, grid[1:]))

    def test_budd(self, budd_example):
        summary = bracket_summary(budd_example.family)
        nu = budd_example.nu
        assert summary.lower == pytest.approx(100**2 * nu.value(-101), rel=1e-12)
        assert summary.lower < BUDD_CONSTANT
        assert summary.upper_over_log == pytest.approx(summary.lower / math.log(100), rel=1e-12)

    def test_fully_packed(self, fully_packed_example):
        summary = bracket_summary(fully_packed_example.family)
        assert summary.lower == pytest.approx(100**2 * fully_packed_example.nu.value(-101), rel=1e-12)
        assert 0.0 < summary.upper_over_log < 1.01 * FULLY_PACKED_CONSTANT

    def test_precondition(self, budd_example):
        with pytest.raises(PreconditionError):
            bracket_summary(budd_example.family, ell_min=1)
        with pytest.raises(PreconditionError):
            bracket_summary(budd_example.family, ell_min=100, ell_max=10)
