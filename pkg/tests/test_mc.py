import math
import random

import numpy as np
import pytest
from mpmath import mp

from rbdkit import (
    FailureModel,
    Leaf,
    McConfig,
    McEstimate,
    ParallelNode,
    RbdModel,
    Segment,
    SeriesNode,
    ValidationError,
    cdf,
    check_mutual_independence,
    estimate_system_reliability,
    evaluate,
    sample_failure_time,
    survival_event,
    survival_indicator_matrix,
)
from modelgen import random_model, time_for_target_reliability

mp.dps = 50


def unit_leaf_model(rate: float = 1.0) -> RbdModel:
    return RbdModel("one", Leaf(Segment("a", FailureModel(rate))))


class TestConfigs:
    def test_defaults(self):
        cfg = McConfig(seed=1, samples=10)
        assert cfg.chunk_size == 65_536

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"seed": -1, "samples": 1},
            {"seed": 2**64, "samples": 1},
            {"seed": 1.5, "samples": 1},
            {"seed": 0, "samples": 0},
            {"seed": 0, "samples": 1, "chunk_size": 0},
        ],
    )
    def test_config_rejects(self, kwargs):
        with pytest.raises(ValueError):
            McConfig(**kwargs)

    def test_estimate_requires_consistent_std_err(self):
        with pytest.raises(ValueError):
            McEstimate(p_hat=0.5, std_err=0.1, samples=100)
        ok = McEstimate(p_hat=0.5, std_err=math.sqrt(0.25 / 100), samples=100)
        assert ok.samples == 100


class TestSampleFailureTime:
    def test_u_one_gives_zero(self):
        assert sample_failure_time(FailureModel(1.0), 1.0) == 0.0

    def test_log_point(self):
        value = sample_failure_time(FailureModel(2.0), math.exp(-2.0))
        assert value == pytest.approx(1.0, rel=1e-12)

    def test_median(self):
        expected = float(mp.log(2) / mp.mpf("0.5"))
        value = sample_failure_time(FailureModel(0.5), 0.5)
        assert value == pytest.approx(expected, rel=1e-12)
        assert value == pytest.approx(1.3862943611198906, rel=1e-12)

    def test_cdf_recovers_complement(self):
        rng = random.Random(3)
        for _ in range(300):
            model = FailureModel(rng.uniform(1e-3, 20.0))
            u = rng.uniform(1e-12, 1.0)
            x = sample_failure_time(model, u)
            assert cdf(model, x) == pytest.approx(1.0 - u, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("u", [0.0, -0.1, 1.0 + 1e-12, math.nan])
    def test_rejects_bad_u(self, u):
        with pytest.raises(ValueError):
            sample_failure_time(FailureModel(1.0), u)

    def test_stratified_grid_matches_cdf(self):
        # Kolmogorov-Smirnov distance of the empirical CDF built from a
        # stratified u-grid, against the analytic CDF.
        n = 100_000
        model = FailureModel(0.8)
        times = np.sort(
            [sample_failure_time(model, (i + 0.5) / n) for i in range(n)]
        )
        analytic = np.array([cdf(model, t) for t in times])
        steps = np.arange(1, n + 1) / n
        distance = max(
            np.max(np.abs(steps - analytic)),
            np.max(np.abs(steps - 1.0 / n - analytic)),
        )
        assert distance <= 1.63 / math.sqrt(n)


class TestSurvivalEvent:
    def test_survives_time_zero_for_interior_u(self):
        assert survival_event(FailureModel(1.0), 0.0, 0.5) is True

    def test_large_u_fails_early(self):
        assert survival_event(FailureModel(1.0), 10.0, 0.99) is False

    def test_u_one_fails_at_zero(self):
        # The sampled time is exactly 0 and the event is strict.
        assert survival_event(FailureModel(1.0), 0.0, 1.0) is False


class TestEstimate:
    def test_single_leaf_within_four_sigma(self):
        est = estimate_system_reliability(
            unit_leaf_model(), 1.0, McConfig(seed=42, samples=1_000_000)
        )
        expected = float(mp.exp(-1))
        assert est.std_err == pytest.approx(0.00048, abs=5e-5)
        assert abs(est.p_hat - expected) <= 4 * est.std_err

    def test_case_study_within_four_sigma(self, case_study_model):
        est = estimate_system_reliability(
            case_study_model, 10.0, McConfig(seed=7, samples=1_000_000)
        )
        assert abs(est.p_hat - float(mp.exp(mp.mpf("-2.71")))) <= 4 * est.std_err

    def test_time_zero_is_exactly_one(self):
        rng = random.Random(11)
        for _ in range(5):
            model = random_model(rng, max_depth=3)
            est = estimate_system_reliability(
                model, 0.0, McConfig(seed=5, samples=50_000)
            )
            assert est.p_hat == 1.0

    def test_bit_identical_for_fixed_config(self):
        cfg = McConfig(seed=99, samples=150_000)
        model = unit_leaf_model(0.3)
        first = estimate_system_reliability(model, 2.0, cfg)
        second = estimate_system_reliability(model, 2.0, cfg)
        assert first == second

    def test_worker_count_does_not_change_the_result(self):
        cfg = McConfig(seed=123, samples=300_000)
        rng = random.Random(17)
        model = random_model(rng, max_depth=3)
        t = time_for_target_reliability(model, 0.5)
        serial = estimate_system_reliability(model, t, cfg, workers=1)
        threaded = estimate_system_reliability(model, t, cfg, workers=4)
        assert serial == threaded

    def test_chunking_covers_a_ragged_tail(self):
        cfg = McConfig(seed=2, samples=100_001, chunk_size=65_536)
        est = estimate_system_reliability(unit_leaf_model(), 1.0, cfg)
        assert est.samples == 100_001
        assert abs(est.p_hat - math.exp(-1)) <= 5 * est.std_err

    def test_parallel_structure_uses_any_survivor(self):
        unit = FailureModel(1.0)
        model = RbdModel(
            "pair",
            ParallelNode((Leaf(Segment("a", unit)), Leaf(Segment("b", unit)))),
        )
        est = estimate_system_reliability(model, 1.0, McConfig(seed=21, samples=400_000))
        expected = float(1 - (1 - mp.exp(-1)) ** 2)
        assert abs(est.p_hat - expected) <= 4 * est.std_err

    def test_invalid_model_rejected(self):
        dup = RbdModel(
            "dup",
            SeriesNode(
                (
                    Leaf(Segment("x", FailureModel(1.0))),
                    Leaf(Segment("x", FailureModel(1.0))),
                )
            ),
        )
        with pytest.raises(ValidationError):
            estimate_system_reliability(dup, 1.0, McConfig(seed=1, samples=10))

    def test_oracle_agreement_on_fuzzed_models(self):
        rng = random.Random(4242)
        cfg = McConfig(seed=8, samples=200_000)
        for _ in range(3):
            model = random_model(rng, max_depth=3, max_fanout=3)
            for target in (0.8, 0.4):
                t = time_for_target_reliability(model, target)
                closed = evaluate(model, t)
                est = estimate_system_reliability(model, t, cfg)
                assert abs(est.p_hat - closed) <= 4 * est.std_err


class TestIndicatorMatrix:
    def test_shape_and_determinism(self):
        segs = [Segment(f"s{i}", FailureModel(r)) for i, r in enumerate([0.4, 1.0, 2.5])]
        times = [math.log(2.0) / s.model.rate for s in segs]
        cfg = McConfig(seed=6, samples=30_000)
        first = survival_indicator_matrix(segs, times, cfg)
        second = survival_indicator_matrix(segs, times, cfg, workers=3)
        assert first.shape == (30_000, 3)
        assert first.dtype == bool
        assert np.array_equal(first, second)

    def test_columns_hit_their_survival_probability(self):
        segs = [Segment(f"s{i}", FailureModel(r)) for i, r in enumerate([0.4, 1.0, 2.5])]
        times = [math.log(2.0) / s.model.rate for s in segs]
        cfg = McConfig(seed=61, samples=200_000)
        matrix = survival_indicator_matrix(segs, times, cfg)
        for j in range(3):
            se = math.sqrt(0.25 / cfg.samples)
            assert abs(matrix[:, j].mean() - 0.5) <= 5 * se

    def test_usage_errors(self):
        seg = Segment("a", FailureModel(1.0))
        cfg = McConfig(seed=1, samples=10)
        with pytest.raises(ValueError):
            survival_indicator_matrix([], [], cfg)
        with pytest.raises(ValueError):
            survival_indicator_matrix([seg], [1.0, 2.0], cfg)


class TestMutualIndependence:
    def sample_columns(self, rates, samples, seed=9):
        segs = [Segment(f"s{i}", FailureModel(r)) for i, r in enumerate(rates)]
        times = [1.0] * len(segs)
        return survival_indicator_matrix(segs, times, McConfig(seed=seed, samples=samples))

    def test_independent_columns_pass(self):
        matrix = self.sample_columns([0.3, 0.7, 1.1], 100_000)
        report = check_mutual_independence(matrix, tolerance_sigmas=5.0)
        assert report.passed
        # Three events give four subsets of size >= 2.
        assert len(report.checks) == 4

    def test_duplicated_event_fails_on_its_pair(self):
        matrix = self.sample_columns([0.7, 1.1], 100_000)
        rigged = np.column_stack([matrix[:, 0], matrix[:, 0], matrix[:, 1]])
        report = check_mutual_independence(rigged, tolerance_sigmas=5.0)
        assert not report.passed
        assert not report["subset 0,1"].passed
        # Pr(A and A) = Pr(A) ~ 0.5 against a product of ~0.25: a huge gap.
        assert report["subset 0,2"].passed

    def test_certain_events_pass(self):
        matrix = np.ones((10_000, 2), dtype=bool)
        report = check_mutual_independence(matrix, tolerance_sigmas=5.0)
        assert report.passed

    def test_column_order_invariant(self):
        matrix = self.sample_columns([0.3, 0.7, 1.1, 2.0], 50_000)
        permutation = [2, 0, 3, 1]
        base = check_mutual_independence(matrix, tolerance_sigmas=5.0)
        permuted = check_mutual_independence(matrix[:, permutation], 5.0)

        def relabel(name: str) -> str:
            cols = sorted(permutation[int(c)] for c in name.split()[1].split(","))
            return "subset " + ",".join(map(str, cols))

        base_by_name = {c.name: (c.passed, c.detail) for c in base.checks}
        for check in permuted.checks:
            assert base_by_name[relabel(check.name)] == (check.passed, check.detail)

    def test_usage_errors(self):
        with pytest.raises(ValueError):
            check_mutual_independence(np.ones((10_000, 1), dtype=bool), 5.0)
        with pytest.raises(ValueError):
            check_mutual_independence(np.ones((10_000, 21), dtype=bool), 5.0)
        with pytest.raises(ValueError):
            check_mutual_independence(np.ones((9_999, 2), dtype=bool), 5.0)
        with pytest.raises(ValueError):
            check_mutual_independence(np.ones((10_000, 2), dtype=bool), 0.0)
        with pytest.raises(ValueError):
            check_mutual_independence(np.ones(10_000, dtype=bool), 5.0)
