import numpy as np
import pytest

from kcpd.dynprog import Segmentation, solve
from kcpd.kernels import KernelSpec
from kcpd.metrics import RiskEvaluator, hausdorff, mc_risk, risk_ratio
from kcpd.simulate import Scenario, generate


class TestHausdorff:
    def test_hand_computed_pair(self):
        report = hausdorff([0.25, 0.5], [0.3, 0.6, 0.9])
        assert report.est_to_true == pytest.approx(0.1, abs=1e-12)
        assert report.true_to_est == pytest.approx(0.4, abs=1e-12)

    def test_identical_sets(self):
        report = hausdorff([0.2, 0.8], [0.2, 0.8])
        assert report.est_to_true == 0.0 and report.true_to_est == 0.0

    def test_swapping_roles_swaps_fields(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.random(rng.integers(1, 6))
            b = rng.random(rng.integers(1, 6))
            fwd, rev = hausdorff(a, b), hausdorff(b, a)
            assert fwd.est_to_true == rev.true_to_est
            assert fwd.true_to_est == rev.est_to_true

    def test_adding_estimated_points_never_hurts_coverage(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            est = list(rng.random(3))
            truth = list(rng.random(4))
            extra = float(rng.random())
            before = hausdorff(est, truth)
            after = hausdorff(est + [extra], truth)
            assert after.true_to_est <= before.true_to_est + 1e-12
            own = hausdorff([extra], truth).est_to_true
            assert after.est_to_true >= own - 1e-12 or after.est_to_true == before.est_to_true

    def test_empty_sets_are_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            hausdorff([], [0.5])
        with pytest.raises(ValueError, match="non-empty"):
            hausdorff([0.5], [])


class TestRiskRatio:
    def test_equal_risks_give_unit_ratio(self):
        report = risk_ratio([0.4, 0.2, 0.9], [0.4, 0.2, 0.9])
        assert report.ratio == 1.0 and report.std_error == 0.0
        assert report.n_replications == 3

    def test_mean_and_error(self):
        report = risk_ratio([2.0, 6.0], [1.0, 2.0])
        assert report.ratio == pytest.approx(2.5)
        assert report.std_error == pytest.approx(np.std([2.0, 3.0], ddof=1) / np.sqrt(2))

    def test_degenerate_oracle_rejected(self):
        with pytest.raises(ValueError, match="oracle"):
            risk_ratio([1.0, 1.0], [0.0, 1.0])

    def test_needs_replications(self):
        with pytest.raises(ValueError):
            risk_ratio([1.0], [1.0])


def linear_risk_closed_form(x: np.ndarray, seg: Segmentation) -> float:
    # standardized mixtures all have mean zero, so with the linear kernel the
    # true embedding is 0 and the risk is the average squared segment mean
    total = 0.0
    for s, e in seg.segments():
        total += (e - s) * x[s:e].mean() ** 2
    return total / len(x)


class TestMcRisk:
    def test_linear_kernel_matches_closed_form(self):
        rng = np.random.default_rng(2)
        spec = KernelSpec("linear")
        for trial in range(20):
            n = 200
            k = int(rng.integers(1, 4))
            bps = tuple(sorted(rng.choice(range(20, n - 20), size=k, replace=False).tolist()))
            ids = tuple(int(i) for i in rng.integers(1, 11, size=k + 1))
            scenario = Scenario(n=n, breakpoints=bps, segment_ids=ids, seed=trial)
            X, _ = generate(scenario)
            est_bps = tuple(sorted(rng.choice(range(10, n - 10), size=2, replace=False).tolist()))
            seg = Segmentation(n, est_bps)
            est = mc_risk(seg, X, spec, scenario, n_ref=1000, seed=100 + trial)
            exact = linear_risk_closed_form(X[:, 0], seg)
            assert abs(est.risk - exact) <= 3 * est.std_error + 1e-9

    def test_risk_never_dips_far_below_zero(self):
        rng = np.random.default_rng(3)
        scenario = Scenario(n=300, breakpoints=(150,), segment_ids=(1, 6), seed=0)
        X, _ = generate(scenario)
        spec = KernelSpec("gaussian", bandwidth=1.0)
        ev = RiskEvaluator(X, spec, scenario, n_ref=1000, seed=1)
        for _ in range(5):
            bps = tuple(sorted(rng.choice(range(10, 290), size=3, replace=False).tolist()))
            est = ev.risk(Segmentation(300, bps))
            assert est.risk >= -2 * est.std_error

    def test_true_segmentation_risk_vanishes_with_length(self):
        scenario = Scenario(
            n=2000, breakpoints=(500, 1000, 1500), segment_ids=(1, 3, 5, 7), seed=4
        )
        X, _ = generate(scenario)
        spec = KernelSpec("gaussian", bandwidth="median").resolve(X)
        est = mc_risk(scenario.segmentation(), X, spec, scenario, n_ref=5000, seed=5)
        assert est.risk < 3 * est.std_error + 4 * 1.0 / 2000  # estimation noise is D*v/n at most

    def test_null_series_single_segment_risk_scale(self):
        # one stationary segment fitted by one segment: the only error is the
        # mean-embedding estimation noise, about v / n
        scenario = Scenario.single(1, n=1000, seed=6)
        X, _ = generate(scenario)
        est = mc_risk(Segmentation(1000), X, KernelSpec("linear"), scenario, n_ref=2000, seed=7)
        v_over_n = 1.0 / 1000
        assert abs(est.risk - X[:, 0].mean() ** 2) <= 3 * est.std_error + 1e-9
        assert est.risk <= 5 * v_over_n

    def test_oracle_over_dimensions_beats_single_segment(self):
        scenario = Scenario(n=400, breakpoints=(200,), segment_ids=(1, 5), seed=8)
        X, _ = generate(scenario)
        spec = KernelSpec("gaussian", bandwidth="median").resolve(X)
        ev = RiskEvaluator(X, spec, scenario, n_ref=1500, seed=9)
        sol = solve(X, spec, d_max=6)
        risks = [ev.risk(sol.best_seg[D]) for D in range(1, 7)]
        best = min(r.risk for r in risks)
        assert best <= risks[0].risk + 3 * risks[0].std_error

    def test_reference_sample_floor(self):
        scenario = Scenario.single(1, n=50, seed=0)
        X, _ = generate(scenario)
        with pytest.raises(ValueError, match="n_ref"):
            mc_risk(Segmentation(50), X, KernelSpec("linear"), scenario, n_ref=200)

    def test_series_must_match_scenario(self):
        scenario = Scenario.single(1, n=50, seed=0)
        with pytest.raises(ValueError, match="length"):
            RiskEvaluator(np.zeros((40, 1)), KernelSpec("linear"), scenario, n_ref=1000)
