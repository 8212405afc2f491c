import json

import numpy as np
import pytest

from kcpd.simulate import (
    DEFAULT_BREAK_FRACTIONS,
    MW_COMPONENTS,
    Scenario,
    generate,
    mixture_moments,
    sample_mw,
)


class TestMixtureTable:
    @pytest.mark.parametrize("dist_id", range(1, 11))
    def test_weights_sum_to_one(self, dist_id):
        w = sum(c[0] for c in MW_COMPONENTS[dist_id])
        assert w == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("dist_id", range(1, 11))
    def test_standardization_is_exact_in_the_moments(self, dist_id):
        # after the affine map (x - m) / sqrt(v), the mixture's analytic
        # moments are exactly 0 and 1
        mean, var = mixture_moments(dist_id)
        w, mu, sd = map(np.array, zip(*MW_COMPONENTS[dist_id]))
        mu_std = (mu - mean) / np.sqrt(var)
        sd_std = sd / np.sqrt(var)
        new_mean = float(w @ mu_std)
        new_var = float(w @ (sd_std**2 + mu_std**2)) - new_mean**2
        assert abs(new_mean) <= 1e-9
        assert abs(new_var - 1.0) <= 1e-9

    def test_first_mixture_is_standard_normal(self):
        assert MW_COMPONENTS[1] == ((1.0, 0.0, 1.0),)


class TestSampleMw:
    @pytest.mark.parametrize("dist_id", range(1, 11))
    def test_monte_carlo_moments(self, dist_id):
        z = sample_mw(dist_id, 100_000, seed=41)
        assert abs(z.mean()) <= 0.02
        assert abs(z.var() - 1.0) <= 0.05

    def test_deterministic_given_seed(self):
        a = sample_mw(3, 1000, seed=7)
        b = sample_mw(3, 1000, seed=7)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, sample_mw(3, 1000, seed=8))

    def test_higher_moments_separate_equal_variance_mixtures(self):
        # ids share mean and variance but differ in shape: skewness or excess
        # kurtosis must tell them apart
        n = 100_000
        z1 = sample_mw(1, n, seed=10)
        z3 = sample_mw(3, n, seed=11)
        skew = lambda z: float(((z - z.mean()) ** 3).mean())
        assert abs(skew(z1) - skew(z3)) > 0.2

    def test_unknown_id(self):
        with pytest.raises(ValueError):
            sample_mw(11, 10, seed=0)
        with pytest.raises(ValueError):
            sample_mw(0, 10, seed=0)

    def test_bad_count(self):
        with pytest.raises(ValueError):
            sample_mw(1, 0, seed=0)


class TestScenario:
    def test_default_layout(self):
        sc = Scenario.default(n=1000, seed=5)
        assert sc.breakpoints == (80, 200, 270, 350, 500, 580, 700, 820, 900)
        assert sc.segment_ids == tuple(range(1, 11))
        assert len(DEFAULT_BREAK_FRACTIONS) == 9

    def test_single_segment(self):
        sc = Scenario.single(4, n=200, seed=1)
        assert sc.breakpoints == ()
        assert sc.ids_per_index().tolist() == [4] * 200

    def test_ids_per_index(self):
        sc = Scenario(n=6, breakpoints=(2, 4), segment_ids=(1, 5, 9))
        assert sc.ids_per_index().tolist() == [1, 1, 5, 5, 9, 9]

    def test_validation(self):
        with pytest.raises(ValueError):
            Scenario(n=10, breakpoints=(5,), segment_ids=(1,))
        with pytest.raises(ValueError):
            Scenario(n=10, breakpoints=(5,), segment_ids=(1, 12))
        with pytest.raises(ValueError):
            Scenario(n=10, breakpoints=(0,), segment_ids=(1, 2))

    def test_json_round_trip(self):
        sc = Scenario(n=50, breakpoints=(10, 30), segment_ids=(2, 7, 4), seed=13)
        doc = json.loads(json.dumps(sc.to_dict()))
        assert Scenario.from_dict(doc) == sc
        assert doc["rng"] == "numpy-pcg64"
        assert doc["fractions"] == [0.2, 0.6]


class TestGenerate:
    def test_shapes_and_truth(self):
        X, fracs = generate(Scenario.default(n=1000, seed=0))
        assert X.shape == (1000, 1)
        np.testing.assert_allclose(fracs, np.array([80, 200, 270, 350, 500, 580, 700, 820, 900]) / 1000)

    def test_deterministic(self):
        sc = Scenario.default(n=300, seed=9)
        X1, _ = generate(sc)
        X2, _ = generate(sc)
        np.testing.assert_array_equal(X1, X2)

    def test_single_segment_has_no_breakpoints(self):
        X, fracs = generate(Scenario.single(2, n=120, seed=3))
        assert X.shape == (120, 1)
        assert fracs.size == 0

    def test_segments_use_their_own_distribution(self):
        # a spiky mixture next to a gaussian: within-segment dispersion of
        # absolute values differs strongly
        sc = Scenario(n=4000, breakpoints=(2000,), segment_ids=(1, 5), seed=2)
        X, _ = generate(sc)
        first, second = X[:2000, 0], X[2000:, 0]
        # the outlier mixture has 90% of its mass in a tight core
        assert np.mean(np.abs(second) < 0.5) > 0.8
        assert np.mean(np.abs(first) < 0.5) < 0.55
