import math
import random

import pytest
from mpmath import mp

from rbdkit import (
    FailureModel,
    cdf,
    check_reliability_axioms,
    log_reliability,
    reliability,
)

mp.dps = 50


def hp_exp(x: str | float) -> float:
    """High-precision exp, rounded once to float64: the expected-value oracle."""
    return float(mp.exp(mp.mpf(x)))


class TestCdf:
    def test_zero_at_time_zero(self):
        assert cdf(FailureModel(2.0), 0.0) == 0.0

    def test_zero_for_negative_times(self):
        assert cdf(FailureModel(2.0), -5.0) == 0.0

    def test_quarter_mean_life(self):
        expected = float(1 - mp.exp(mp.mpf("-0.25")))
        value = cdf(FailureModel(0.0025), 100.0)
        assert value == pytest.approx(expected, rel=1e-12)
        assert value == pytest.approx(0.22119921692859512, rel=1e-12)

    @pytest.mark.parametrize("t", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite_times(self, t):
        with pytest.raises(ValueError):
            cdf(FailureModel(1.0), t)

    def test_non_decreasing_over_the_real_line(self):
        rng = random.Random(101)
        model = FailureModel(0.7)
        ts = sorted(rng.uniform(-10.0, 30.0) for _ in range(500))
        values = [cdf(model, t) for t in ts]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_small_rate_times_keep_precision(self):
        # 1 - exp(-x) ~ x for tiny x; a naive 1.0 - exp(...) would round to 0.
        model = FailureModel(1e-12)
        assert cdf(model, 1.0) == pytest.approx(1e-12, rel=1e-9)


class TestReliability:
    def test_one_at_time_zero(self):
        assert reliability(FailureModel(1.0), 0.0) == 1.0

    def test_one_at_time_zero_for_any_rate(self):
        rng = random.Random(7)
        for _ in range(200):
            rate = math.exp(rng.uniform(math.log(1e-6), math.log(1e6)))
            assert reliability(FailureModel(rate), 0.0) == 1.0

    def test_unit_rate_unit_time(self):
        assert reliability(FailureModel(1.0), 1.0) == pytest.approx(
            hp_exp(-1), rel=1e-12
        )

    def test_case_study_aggregate_rate(self):
        value = reliability(FailureModel(0.271), 10.0)
        assert value == pytest.approx(hp_exp("-2.71"), rel=1e-12)
        assert value == pytest.approx(0.06653680671501686, rel=1e-12)

    @pytest.mark.parametrize("t", [-1.0, -1e-12, math.nan, math.inf])
    def test_rejects_bad_times(self, t):
        with pytest.raises(ValueError):
            reliability(FailureModel(1.0), t)

    def test_bounds_and_closed_form_to_4_ulps(self):
        rng = random.Random(13)
        for _ in range(1000):
            rate = math.exp(rng.uniform(math.log(1e-4), math.log(1e3)))
            t = rng.uniform(0.0, 100.0)
            r = reliability(FailureModel(rate), t)
            assert 0.0 <= r <= 1.0
            expected = math.exp(-rate * t)
            assert abs(r - expected) <= 4 * math.ulp(expected)

    def test_monotone_in_time(self):
        model = FailureModel(0.3)
        ts = [i * 0.37 for i in range(300)]
        values = [reliability(model, t) for t in ts]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_complements_cdf(self):
        rng = random.Random(29)
        for _ in range(200):
            model = FailureModel(rng.uniform(1e-3, 10.0))
            t = rng.uniform(0.0, 50.0)
            assert reliability(model, t) + cdf(model, t) == pytest.approx(
                1.0, rel=1e-12
            )


class TestLogReliability:
    @pytest.mark.parametrize(
        "rate, t, expected",
        [(1.0, 0.0, 0.0), (2.0, 3.0, -6.0), (0.0025, 100.0, -0.25)],
    )
    def test_exact_values(self, rate, t, expected):
        assert log_reliability(FailureModel(rate), t) == expected

    def test_exp_recovers_reliability_exactly(self):
        rng = random.Random(43)
        for _ in range(500):
            model = FailureModel(rng.uniform(1e-4, 50.0))
            t = rng.uniform(0.0, 200.0)
            assert math.exp(log_reliability(model, t)) == reliability(model, t)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            log_reliability(FailureModel(1.0), -0.5)


class TestReliabilityAxioms:
    def test_unit_rate_full_grid(self):
        report = check_reliability_axioms(
            FailureModel(1.0), [float(i) for i in range(51)], 1e-6
        )
        assert report.passed
        assert [c.name for c in report.checks] == [
            "max_at_zero",
            "monotone",
            "vanishing",
        ]

    def test_single_point_grid_is_vacuous(self):
        report = check_reliability_axioms(FailureModel(0.0025), [0.0], 0.5)
        assert report.passed

    def test_corrupted_implementation_fails_max_at_zero(self):
        def corrupt(model, t):
            return 1.1 if t == 0.0 else reliability(model, t)

        report = check_reliability_axioms(
            FailureModel(1.0), [0.0, 1.0, 2.0], 1e-6, reliability_fn=corrupt
        )
        assert not report["max_at_zero"].passed
        assert report["monotone"].passed

    def test_increasing_implementation_fails_monotone(self):
        def corrupt(model, t):
            return min(1.0, 0.5 + 0.01 * t) if t > 0 else 1.0

        report = check_reliability_axioms(
            FailureModel(1.0), [0.0, 1.0, 2.0], 1e-6, reliability_fn=corrupt
        )
        assert not report["monotone"].passed

    def test_fat_tail_fails_vanishing(self):
        def corrupt(model, t):
            return 1.0 if t == 0.0 else 0.5

        report = check_reliability_axioms(
            FailureModel(1.0),
            [0.0, 10.0, 20.0, 30.0],
            1e-3,
            reliability_fn=corrupt,
        )
        assert not report["vanishing"].passed

    def test_threshold_is_strict(self):
        # Points at or below log(1/eps)/rate are out of scope for the tail check.
        model = FailureModel(1.0)
        eps = 1e-3
        threshold = math.log(1.0 / eps)
        report = check_reliability_axioms(model, [0.0, threshold], eps)
        assert report.passed

    def test_usage_errors(self):
        model = FailureModel(1.0)
        with pytest.raises(ValueError):
            check_reliability_axioms(model, [1.0, 0.0], 1e-6)  # unsorted
        with pytest.raises(ValueError):
            check_reliability_axioms(model, [1.0, 2.0], 1e-6)  # missing zero
        with pytest.raises(ValueError):
            check_reliability_axioms(model, [], 1e-6)
        with pytest.raises(ValueError):
            check_reliability_axioms(model, [0.0, 1.0], 0.0)
        with pytest.raises(ValueError):
            check_reliability_axioms(model, [0.0, 1.0], 1.5)
