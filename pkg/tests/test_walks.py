"""
Tests for the random walk services: sampling, ladder statistics and the
Wiener-Hopf side
"""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from o2gasket.core.exceptions import LadderAnomalyError, PreconditionError, SupportTruncationError
from o2gasket.schemas.reports import LadderStatistics
from o2gasket.schemas.series import GSequence, TruncationConfig
from o2gasket.schemas.walks import WalkConfig
from o2gasket.services.series.coefficients import coefficients_for
from o2gasket.services.walks.analytic import (
    asc_ladder_series,
    char_fn,
    char_fn_grid,
    euler_tail,
    f_on_circle,
    pre_renewal_check,
    wiener_hopf_residual,
)
from o2gasket.services.walks.ladders import histogram_rows, shard_plan
from o2gasket.services.walks.sampler import AliasSampler, build_sampler
from o2gasket.services.walks.shard_pool import ShardPool, ShardStatus, merge_statistics
from o2gasket.services.walks import shard_pool
from o2gasket.services.weights.distributions import PerturbedNu, SeriesNu, SymmetricNu, TabulatedNu
from tests.conftest import RANDOM_G_WEIGHTS, make_g

BUDD_ASCENDING = [0.5, 0.25, 1 / 16, 1 / 32, 5 / 256]
DESCENDING = [0.5, 1 / 8, 1 / 16, 5 / 128]
THETAS = [0.5, 1.0, 2.0, 3.0, math.pi]


def within_band(count: int, n: int, p: float, censored: int) -> bool:
    sigma = math.sqrt(n * p * (1 - p))
    return abs(count - n * p) <= 5 * sigma + censored


@pytest.fixture(scope="module")
def budd_sampler():
    return build_sampler(SymmetricNu(), WalkConfig(support_cut=1000))


@pytest.fixture(scope="module")
def budd_ladders(budd_sampler):
    cfg = WalkConfig(n_walks=20_000, horizon=10_000, master_seed=7, workers=1)
    return shard_pool.simulate_ladders(budd_sampler, cfg)


class TestSampler:
    def test_support_cut_too_small(self):
        with pytest.raises(SupportTruncationError) as exc:
            build_sampler(SymmetricNu(), WalkConfig(support_cut=100))
        assert exc.value.truncated_mass == pytest.approx(2 / (math.pi * 201))

    def test_truncated_mass(self, budd_sampler):
        assert budd_sampler.truncated_mass == pytest.approx(2 / (math.pi * 2001), rel=1e-12)
        assert budd_sampler.support[0] == -1000
        assert budd_sampler.support[-1] == 1000

    def test_alias_table_reproduces_probabilities(self, budd_sampler):
        ks = budd_sampler.support
        expected = SymmetricNu().values(ks)
        expected = expected / expected.sum()
        np.testing.assert_allclose(budd_sampler.probabilities(), expected, rtol=1e-8, atol=1e-15)

    def test_draws_stay_in_support(self, budd_sampler):
        draws = budd_sampler.draw(np.random.default_rng(1), 50_000)
        assert draws.min() >= -1000
        assert draws.max() <= 1000

    def test_frequencies(self):
        sampler = AliasSampler(np.array([-1, 0, 3]), np.array([0.2, 0.5, 0.3]))
        n = 100_000
        draws = sampler.draw(np.random.default_rng(2), n)
        for value, p in ((-1, 0.2), (0, 0.5), (3, 0.3)):
            count = int(np.count_nonzero(draws == value))
            assert within_band(count, n, p, 0)

    def test_negative_values_counted_as_truncated(self):
        nu = PerturbedNu(TabulatedNu({-1: 0.5, 1: 0.5}), {2: -0.01})
        with pytest.raises(SupportTruncationError):
            build_sampler(nu, WalkConfig(support_cut=10, mass_limit=1e-3))


class TestLadders:
    def test_descending_law(self, budd_ladders):
        hist = budd_ladders.first_strict_descending
        assert budd_ladders.n_walks == 20_000
        for height, p in enumerate(DESCENDING, start=1):
            assert within_band(hist.heights.get(height, 0), 20_000, p, hist.censored)

    def test_ascending_law(self, budd_ladders):
        hist = budd_ladders.first_weak_ascending
        for height, p in enumerate(BUDD_ASCENDING):
            assert within_band(hist.heights.get(height, 0), 20_000, p, hist.censored)

    def test_every_walk_accounted_for(self, budd_ladders):
        assert budd_ladders.first_weak_ascending.total == 20_000
        assert budd_ladders.first_strict_descending.total == 20_000

    def test_first_epoch(self, budd_ladders):
        # one step lands on >= 0 with probability nu([0, inf)) = 1/2 + nu(0)/2
        epochs = budd_ladders.first_weak_ascending.epochs
        p = 1.0 - 1.0 / math.pi
        assert within_band(epochs.get(1, 0), 20_000, p, 0)

    def test_reproducible(self, budd_sampler):
        cfg = WalkConfig(n_walks=2000, horizon=1000, master_seed=11, workers=1)
        first = shard_pool.simulate_ladders(budd_sampler, cfg)
        second = shard_pool.simulate_ladders(budd_sampler, cfg)
        assert first.model_dump() == second.model_dump()
        other = shard_pool.simulate_ladders(budd_sampler, cfg.model_copy(update={"master_seed": 12}))
        assert other.model_dump() != first.model_dump()

    def test_reproducible_with_workers(self, budd_sampler):
        cfg = WalkConfig(n_walks=3001, horizon=500, master_seed=5, workers=2)
        first = shard_pool.simulate_ladders(budd_sampler, cfg)
        second = shard_pool.simulate_ladders(budd_sampler, cfg)
        assert first.n_walks == 3001
        assert first.model_dump() == second.model_dump()

    def test_shard_plan(self):
        assert shard_plan(10, 3) == (4, 3, 3)
        assert shard_plan(4, 4) == (1, 1, 1, 1)

    def test_merge(self, budd_ladders):
        merged = merge_statistics([budd_ladders, budd_ladders])
        assert merged.n_walks == 40_000
        assert merged.first_weak_ascending.heights[0] == 2 * budd_ladders.first_weak_ascending.heights[0]

    def test_histogram_rows(self, budd_ladders):
        rows = histogram_rows(budd_ladders, max_value=4, ascending_expected=BUDD_ASCENDING[:2])
        assert [(r.ladder_type, r.value) for r in rows] == [
            ("weak_ascending", 0),
            ("weak_ascending", 1),
            ("weak_ascending", 2),
            ("weak_ascending", 3),
            ("strict_descending", 1),
            ("strict_descending", 2),
            ("strict_descending", 3),
            ("strict_descending", 4),
        ]
        assert rows[0].expected_probability == 0.5
        assert rows[2].expected_probability is None
        assert rows[2].z_score is None
        assert rows[4].expected_probability == 0.5
        assert all(row.z_score is not None for row in rows[:2] + rows[4:])

    @pytest.mark.slow
    def test_full_size_run(self, budd_sampler):
        stats = shard_pool.simulate_ladders(budd_sampler, WalkConfig(n_walks=100_000, horizon=10_000, workers=2))
        hist = stats.first_strict_descending
        for height, p in enumerate(DESCENDING, start=1):
            assert within_band(hist.heights.get(height, 0), 100_000, p, hist.censored)


class TestShardPool:
    async def test_retry_then_succeed(self):
        calls = []

        def flaky(x):
            calls.append(x)
            if len(calls) < 3:
                raise RuntimeError("transient")
            return x * 2

        pool = ShardPool(max_workers=1, max_retries=3, backoff=0.01)
        shard = pool.add_shard("flaky", flaky, 21)
        assert await pool.run() == [42]
        assert shard.status == ShardStatus.COMPLETED
        assert shard.retry_count == 2
        assert pool.get_stats()["retries"] == 2

    async def test_permanent_failure(self):
        def broken():
            raise ValueError("always")

        pool = ShardPool(max_workers=1, max_retries=2, backoff=0.01)
        shard = pool.add_shard("broken", broken)
        with pytest.raises(ValueError):
            await pool.run()
        assert shard.status == ShardStatus.FAILED
        assert pool.get_stats()["status_counts"]["failed"] == 1

    async def test_results_in_shard_order(self):
        pool = ShardPool(max_workers=1)
        for i in range(5):
            pool.add_shard(f"s{i}", lambda v: LadderStatistics(n_walks=v), i + 1)
        results = await pool.run()
        assert [r.n_walks for r in results] == [1, 2, 3, 4, 5]


def ladder_case(name: str, request):
    if name == "fully_packed":
        example = request.getfixturevalue("fully_packed_example")
        return example.g, example.nu
    g = make_g(*RANDOM_G_WEIGHTS[1])
    return g, SeriesNu(g)


@pytest.fixture(scope="module", params=["fully_packed", "random_g1"])
def family_case(request):
    g, nu = ladder_case(request.param, request)
    # log-corrected tails need a wider window than the Budd sampler
    return g, build_sampler(nu, WalkConfig(support_cut=20_000))


class TestLadderBands:
    def check_bands(self, g, stats, n):
        descending = stats.first_strict_descending
        for height, p in enumerate(DESCENDING, start=1):
            assert within_band(descending.heights.get(height, 0), n, p, descending.censored)
        ascending = stats.first_weak_ascending
        for height, p in enumerate(asc_ladder_series(g, 4)):
            assert within_band(ascending.heights.get(height, 0), n, float(p), ascending.censored)

    def test_bands(self, family_case):
        g, sampler = family_case
        cfg = WalkConfig(n_walks=20_000, horizon=10_000, master_seed=3, workers=1)
        stats = shard_pool.simulate_ladders(sampler, cfg)
        assert stats.first_weak_ascending.total == 20_000
        self.check_bands(g, stats, 20_000)

    @pytest.mark.slow
    def test_bands_full_size(self, family_case):
        g, sampler = family_case
        cfg = WalkConfig(n_walks=100_000, horizon=10_000, master_seed=4, workers=2)
        self.check_bands(g, shard_pool.simulate_ladders(sampler, cfg), 100_000)


class TestCharFn:
    def test_closed_form(self):
        nu = SymmetricNu()
        assert abs(char_fn(nu, math.pi)) < 1e-15
        assert char_fn(nu, math.pi / 3) == pytest.approx(0.5, abs=1e-15)
        assert char_fn(nu, 0.0) == 1.0

    def test_origin(self, zero_g):
        assert char_fn(SeriesNu(zero_g), 0.0) == 1.0
        assert char_fn(SeriesNu(zero_g), 2 * math.pi) == 1.0

    def test_f_link_matches_direct_sum(self, zero_g, half_g):
        loose = TruncationConfig(target_abs_tol=1e-4)
        for g in (zero_g, half_g, GSequence.parse("0.1,0.2")):
            nu = SeriesNu(g)
            direct = PerturbedNu(nu, {})
            for theta in (0.3, 1.0, 2.5):
                assert abs(char_fn(nu, theta) - char_fn(direct, theta, loose)) < 2e-4

    def test_fully_packed_symmetric_about_minus_one(self, zero_g):
        nu = SeriesNu(zero_g)
        for theta in THETAS:
            shifted = char_fn(nu, theta) * cmath.exp(1j * theta)
            assert abs(shifted.imag) < 1e-9
            assert abs(char_fn(nu, theta)) <= 1.0 + 1e-9

    def test_f_on_circle_leading_log(self, zero_g):
        fc = coefficients_for(zero_g)
        theta = 1e-3
        value = f_on_circle(fc, theta)
        assert value.real == pytest.approx(-(2 / math.pi) * math.log(theta), rel=0.1)

    def test_grid_matches_pointwise(self, zero_g, budd_g):
        grid = np.array([0.0, 0.4, 1.7, math.pi, 5.0])
        for g in (zero_g, budd_g):
            nu = SeriesNu(g)
            values = char_fn_grid(nu, grid)
            assert values[0] == 1.0
            for theta, value in zip(grid, values):
                assert abs(value - char_fn(nu, theta)) < 1e-9

    def test_tabulated(self):
        nu = TabulatedNu({-1: 0.5, 1: 0.5})
        assert char_fn(nu, 1.0) == pytest.approx(math.cos(1.0), abs=1e-15)


class TestAscendingLadder:
    def test_budd(self, budd_g):
        coeffs = asc_ladder_series(budd_g, 8)
        np.testing.assert_allclose(coeffs[:5], BUDD_ASCENDING, atol=1e-6)

    def test_fully_packed_first(self, zero_g):
        assert asc_ladder_series(zero_g, 4)[0] == pytest.approx(1 - 8 / (3 * math.pi), abs=1e-14)

    def test_sub_probability(self, random_g):
        coeffs = asc_ladder_series(random_g, 2000)
        assert coeffs.min() >= -1e-10
        assert math.fsum(coeffs.tolist()) <= 1.0 + 1e-10

    def test_anomaly(self, half_g):
        with pytest.raises(LadderAnomalyError) as exc:
            asc_ladder_series(half_g, 4, tol=-1.0)
        assert exc.value.index == 0

    def test_precondition(self, half_g):
        with pytest.raises(PreconditionError):
            asc_ladder_series(half_g, 0)


class TestWienerHopf:
    def test_residual_small(self, zero_g, half_g):
        for g in (zero_g, half_g, GSequence.parse("0.1,0.2")):
            assert wiener_hopf_residual(g, THETAS) <= 1e-6

    @pytest.mark.parametrize("name", ["zero_g", "budd_g"])
    def test_residual_on_full_grid(self, name, request):
        g = request.getfixturevalue(name)
        grid = np.linspace(0.1, 2 * math.pi - 0.1, 66)[1:-1]
        assert grid.size == 64
        assert wiener_hopf_residual(g, grid, N=10**4) <= 1e-6

    def test_grid_avoids_origin(self, half_g):
        with pytest.raises(PreconditionError):
            wiener_hopf_residual(half_g, [1.0, 0.0])
        with pytest.raises(PreconditionError):
            wiener_hopf_residual(half_g, [2 * math.pi])

    def test_euler_tail_exact_on_polynomials(self):
        z = 0.3 + 0.5j
        n = np.arange(3000, dtype=float)
        coeffs = n * n
        start = 40
        expected = sum(coeffs[i] * z**i for i in range(start, 3000))
        assert abs(euler_tail(coeffs, start, z) - expected) < 1e-10 * abs(expected)

    def test_euler_tail_needs_coefficients(self):
        with pytest.raises(PreconditionError):
            euler_tail(np.ones(6), 3, 0.5j)


class TestPreRenewal:
    def test_exact_when_deep(self):
        result = pre_renewal_check(200, 20)
        assert result.residual == 0.0
        assert result.omitted_bound == 0.0
        assert result.total <= 1e-12
        assert result.sums[3] == Fraction(5, 16)

    def test_shallow_bound(self):
        result = pre_renewal_check(5, 20)
        assert result.omitted_bound > 0
        assert result.residual <= result.omitted_bound

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            pre_renewal_check(0, 5)
