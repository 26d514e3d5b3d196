"""Distribution layer: closed forms, moment matching, inverse transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cocval.distributions import (
    Degenerate,
    Lognormal,
    Normal,
    ParetoTypeI,
    distribution_from_config,
    distribution_to_config,
    lognormal_from_moments,
    pareto_from_mean_beta,
    pareto_from_moments,
    standard_normal_cdf,
    standard_normal_quantile,
)
from cocval.montecarlo import generate_scenarios


def bisect_normal_quantile(p: float, tol: float = 1e-13) -> float:
    """Independent oracle: bisection on the normal CDF.

    Levels above 1/2 are reflected so the CDF comparison happens where
    it has full absolute resolution (near 1 the CDF is flat at the ulp
    scale and bisection alone cannot place the root).
    """
    if p > 0.5:
        return -bisect_normal_quantile(1.0 - p, tol)
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if standard_normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestStandardNormalQuantile:
    def test_against_bisection_oracle(self):
        # p = 0.995 must land on 2.5758 (4 decimals) per the bisection oracle
        oracle = bisect_normal_quantile(0.995)
        assert abs(oracle - 2.5758) < 1e-4
        assert abs(standard_normal_quantile(0.995) - oracle) < 1e-10

    def test_accuracy_across_range(self):
        ps = np.concatenate([np.geomspace(1e-8, 0.5, 60), 1 - np.geomspace(1e-8, 0.5, 60)])
        for p in ps:
            assert abs(standard_normal_quantile(float(p)) - bisect_normal_quantile(float(p))) < 1e-10

    def test_median_and_symmetry(self):
        assert standard_normal_quantile(0.5) == 0.0
        # antisymmetry up to the information lost when the caller
        # rounds 1 - p; a few ulps of the quantile value
        for p in (0.005, 0.01, 0.2, 0.4999):
            total = standard_normal_quantile(1.0 - p) + standard_normal_quantile(p)
            assert abs(total) < 1e-14

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_domain_error(self, p):
        with pytest.raises(ValueError):
            standard_normal_quantile(p)


class TestCdfExamples:
    def test_normal_symmetry_point(self):
        assert Normal(0.0, 1.0).cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_pareto_support_edge(self):
        assert ParetoTypeI(0.5, 2.0).cdf(0.5) == 0.0

    def test_lognormal_median(self):
        assert Lognormal(0.0, 1.0).cdf(1.0) == pytest.approx(0.5, abs=1e-15)

    def test_cdf_monotone_and_bounded(self):
        xs = np.linspace(-5, 25, 400)
        for dist in (Normal(1.0, 0.3), Lognormal(0.0, 0.5), ParetoTypeI(0.5, 2.0), Degenerate(1.0)):
            vals = dist.cdf(xs)
            assert np.all(np.diff(vals) >= 0)
            assert np.all((vals >= 0) & (vals <= 1))


class TestQuantileExamples:
    def test_normal_high_quantile(self):
        assert Normal(0.0, 1.0).quantile(0.995) == pytest.approx(2.5758, abs=1e-4)

    def test_pareto_high_quantile(self):
        # 0.5 * 0.005 ** (-1/2), about 7.07 times the scale
        assert ParetoTypeI(0.5, 2.0).quantile(0.995) == pytest.approx(7.0710678, abs=1e-6)

    def test_degenerate_any_level(self):
        d = Degenerate(1.0)
        for p in (0.01, 0.5, 0.99):
            assert d.quantile(p) == 1.0

    def test_domain_errors(self):
        for dist in (Normal(0, 1), Lognormal(0, 1), ParetoTypeI(1, 2), Degenerate(3)):
            with pytest.raises(ValueError):
                dist.quantile(0.0)
            with pytest.raises(ValueError):
                dist.quantile(1.0)


class TestSampleExamples:
    def test_normal_median_draw(self):
        assert Normal(0.0, 1.0).sample(0.5) == 0.0

    def test_lognormal_tail_draw(self):
        assert Lognormal(0.0, 1.0).sample(0.995) == pytest.approx(13.143, abs=0.01)

    def test_pareto_tail_draw(self):
        assert ParetoTypeI(0.5, 2.0).sample(0.995) == pytest.approx(7.0711, abs=1e-4)

    def test_sample_is_quantile(self):
        u = np.linspace(0.01, 0.99, 23)
        for dist in (Normal(1, 0.3), Lognormal(0.1, 0.4), ParetoTypeI(0.8, 3.0), Degenerate(2.0)):
            assert np.array_equal(dist.sample(u), dist.quantile(u))


class TestMomentMatching:
    def test_lognormal_examples(self):
        d = lognormal_from_moments(1.05, 0.2)
        assert d.sd_log ** 2 == pytest.approx(0.035638, abs=1e-6)
        assert d.mu_log == pytest.approx(0.030971, abs=1e-6)
        d2 = lognormal_from_moments(1.0, 0.3)
        assert d2.sd_log ** 2 == pytest.approx(math.log(1.09), rel=1e-12)
        assert d2.mu_log == pytest.approx(-0.5 * math.log(1.09), rel=1e-12)

    def test_lognormal_round_trip(self):
        for mean, sd in [(1.05, 0.2), (1.0, 0.3), (2.5, 1.7), (0.3, 0.02)]:
            d = lognormal_from_moments(mean, sd)
            assert d.mean == pytest.approx(mean, rel=1e-12)
            assert math.sqrt(d.variance) == pytest.approx(sd, rel=1e-12)

    def test_lognormal_continuity_limit(self):
        d = lognormal_from_moments(1.0, 1e-6)
        assert abs(d.mu_log) < 1e-11
        assert d.sd_log == pytest.approx(1e-6, rel=1e-6)

    def test_lognormal_degenerate_input(self):
        with pytest.raises(ValueError):
            lognormal_from_moments(1.0, 0.0)

    def test_pareto_examples(self):
        d = pareto_from_moments(1.0, 0.3)
        assert d.beta == pytest.approx(4.4801, abs=1e-4)
        assert d.x_m == pytest.approx(0.77679, abs=1e-5)
        d2 = pareto_from_moments(1.0, 0.2)
        assert d2.beta == pytest.approx(1 + math.sqrt(26), rel=1e-12)
        assert d2.x_m == pytest.approx(0.83604, abs=1e-5)

    def test_pareto_round_trip(self):
        for mean, sd in [(1.0, 0.3), (1.0, 0.2), (2.0, 0.6), (5.0, 0.4)]:
            d = pareto_from_moments(mean, sd)
            assert d.beta > 2.0
            assert d.mean == pytest.approx(mean, rel=1e-12)
            assert math.sqrt(d.variance) == pytest.approx(sd, rel=1e-12)

    def test_pareto_scale_equivariance(self):
        a, b = pareto_from_moments(1.0, 0.3), pareto_from_moments(2.0, 0.6)
        assert b.beta == pytest.approx(a.beta, rel=1e-14)
        assert b.x_m == pytest.approx(2 * a.x_m, rel=1e-14)

    def test_pareto_from_mean_beta(self):
        assert pareto_from_mean_beta(1.0, 2.0).x_m == 0.5
        assert pareto_from_mean_beta(1.0, 1.1).x_m == pytest.approx(1 / 11, rel=1e-12)
        assert pareto_from_mean_beta(1.0, 1e9).x_m == pytest.approx(1.0, rel=1e-8)
        with pytest.raises(ValueError):
            pareto_from_mean_beta(1.0, 1.0)


class TestInvariants:
    @given(st.floats(min_value=0.001, max_value=0.999))
    @settings(max_examples=200, deadline=None)
    def test_quantile_cdf_round_trip(self, p):
        for dist in (Normal(1.0, 0.3), Lognormal(0.2, 0.5), ParetoTypeI(0.5, 2.0)):
            x = dist.quantile(p)
            assert dist.quantile(dist.cdf(x)) == pytest.approx(x, abs=1e-9, rel=1e-9)

    @given(st.floats(min_value=0.01, max_value=100.0), st.floats(min_value=0.001, max_value=0.999))
    @settings(max_examples=200, deadline=None)
    def test_scale_equivariance_of_quantiles(self, a, p):
        for dist in (Lognormal(0.1, 0.4), ParetoTypeI(0.7, 2.5)):
            scaled = dist.scaled(a)
            assert scaled.quantile(p) == pytest.approx(a * dist.quantile(p), rel=1e-12)

    def test_inverse_transform_law(self):
        scen = generate_scenarios(10 ** 6, seed=2024)
        u = scen.u_claim
        cases = [
            Normal(1.0, 0.3),
            lognormal_from_moments(1.0, 0.3),
            pareto_from_moments(1.0, 0.3),  # tail index above 2
        ]
        for dist in cases:
            draws = dist.sample(u)
            se = math.sqrt(dist.variance / u.size)
            assert abs(float(np.mean(draws)) - dist.mean) < 4 * se

    def test_cdf_of_quantile_at_least_p(self):
        ps = np.linspace(0.01, 0.99, 99)
        for dist in (Normal(0, 1), Lognormal(0, 1), ParetoTypeI(0.5, 2.0), Degenerate(1.0)):
            qs = dist.quantile(ps)
            assert np.all(dist.cdf(qs) >= ps - 1e-12)


class TestStopLoss:
    def test_matches_quadrature_of_survival(self):
        from scipy.integrate import quad
        cases = [(Normal(1.0, 0.3), -0.5), (Normal(1.0, 0.3), 1.2),
                 (Lognormal(0.0, 0.5), 0.8), (ParetoTypeI(0.5, 2.5), 1.5)]
        for dist, t in cases:
            ref, _ = quad(lambda s: float(dist.sf(s)), t, np.inf, limit=400)
            assert dist.stop_loss(t) == pytest.approx(ref, rel=1e-6, abs=1e-9)
        assert Degenerate(2.0).stop_loss(0.7) == pytest.approx(1.3, rel=1e-15)
        assert Degenerate(2.0).stop_loss(2.5) == 0.0


class TestConfig:
    def test_parse_native_and_moment_forms(self):
        assert distribution_from_config({"kind": "normal", "mean": 1, "sd": 0.3}) == Normal(1.0, 0.3)
        assert distribution_from_config(
            {"kind": "lognormal", "mean": 1.0, "sd": 0.3}) == lognormal_from_moments(1.0, 0.3)
        assert distribution_from_config(
            {"kind": "pareto", "mean": 1.0, "beta": 2.0}) == ParetoTypeI(0.5, 2.0)
        assert distribution_from_config({"kind": "degenerate", "value": 1}) == Degenerate(1.0)

    def test_round_trip(self):
        dists = [Normal(1.0, 0.3), Lognormal(0.1, 0.4), ParetoTypeI(0.5, 2.0), Degenerate(1.0)]
        for dist in dists:
            assert distribution_from_config(distribution_to_config(dist)) == dist

    def test_rejects_bad_specs(self):
        for bad in [{"kind": "cauchy"}, {"kind": "normal", "mean": 1},
                    {"kind": "pareto", "x_m": 1.0}, {"mean": 1.0, "sd": 0.2}, "normal"]:
            with pytest.raises(ValueError):
                distribution_from_config(bad)


class TestValidation:
    def test_parameter_gates(self):
        with pytest.raises(ValueError):
            Normal(0.0, -1.0)
        with pytest.raises(ValueError):
            Lognormal(0.0, 0.0)
        with pytest.raises(ValueError):
            ParetoTypeI(0.0, 2.0)
        with pytest.raises(ValueError):
            ParetoTypeI(1.0, 1.0)

    def test_pareto_variance_finiteness(self):
        assert math.isinf(ParetoTypeI(0.5, 2.0).variance)
        assert math.isfinite(ParetoTypeI(0.5, 2.1).variance)

    def test_scaled_zero_collapses_to_point_mass(self):
        assert Lognormal(0.0, 1.0).scaled(0.0) == Degenerate(0.0)
        with pytest.raises(ValueError):
            ParetoTypeI(1.0, 2.0).scaled(-1.0)
