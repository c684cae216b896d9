"""
Tests for scenario generation
"""
import numpy as np
import pytest

from kernel_mi.datagen import (DistributionFamily, DistributionSpec, ModelForm, ModelSpec,
                               apply_model, derive_seed, describe_scenario, generate_scenario,
                               sample_distribution)
from kernel_mi.exceptions import ParameterError

N_LARGE = 100_000


class TestSampleDistribution:

    def test_gaussian_moments(self):
        x = sample_distribution(DistributionSpec("gaussian", 1.0), N_LARGE, seed=11)
        assert -0.02 <= x.mean() <= 0.02
        assert 0.97 <= x.var() <= 1.03

    def test_poisson_moments(self):
        x = sample_distribution(DistributionSpec("poisson", 4.0), N_LARGE, seed=12)
        assert x.mean() == pytest.approx(4.0, rel=0.02)
        assert x.var() == pytest.approx(4.0, rel=0.02)

    def test_poisson_draws_are_nonnegative_integers(self):
        x = sample_distribution(DistributionSpec("poisson", 10.0), 1000, seed=13)
        assert np.all(x >= 0)
        assert np.array_equal(x, np.round(x))

    def test_laplace_variance(self):
        x = sample_distribution(DistributionSpec("laplace", 2.0), N_LARGE, seed=14)
        assert x.var() == pytest.approx(2.0, rel=0.03)
        assert abs(x.mean()) < 0.03

    @pytest.mark.parametrize("variance", [0.0, -1.0])
    def test_non_positive_variance_rejected(self, variance):
        with pytest.raises(ParameterError):
            DistributionSpec("gaussian", variance)

    def test_zero_samples_rejected(self):
        with pytest.raises(ParameterError):
            sample_distribution(DistributionSpec("laplace", 1.0), 0, seed=1)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            DistributionSpec("cauchy", 1.0)


class TestApplyModel:

    def test_linear(self):
        assert apply_model(ModelSpec("linear", 100), 1.0, 0.5) == pytest.approx(100.5)

    def test_periodic_at_origin(self):
        assert apply_model(ModelSpec("periodic", 100), 0.0, 0.0) == 0.0

    def test_polynomial(self):
        assert apply_model(ModelSpec("poly", 10), 2.0, -1.0) == pytest.approx(59.0)

    def test_vectorised(self):
        x1 = np.array([0.0, 1.0, 2.0])
        e = np.array([1.0, 1.0, 1.0])
        out = apply_model(ModelSpec(ModelForm.POLY, 1.0), x1, e)
        assert np.allclose(out, [1.0, 3.0, 7.0])


class TestGenerateScenario:

    def test_same_seed_is_bit_identical(self):
        dist = DistributionSpec("laplace", 10.0)
        model = ModelSpec("periodic", 10.0)
        a = generate_scenario(dist, model, 25, seed=99)
        b = generate_scenario(dist, model, 25, seed=99)
        for u, v in zip((a.x1, a.x2, a.x3, a.e), (b.x1, b.x2, b.x3, b.e)):
            assert np.array_equal(u, v)

    def test_different_seeds_differ(self):
        dist = DistributionSpec("gaussian", 1.0)
        model = ModelSpec("linear", 1.0)
        a = generate_scenario(dist, model, 10, seed=1)
        b = generate_scenario(dist, model, 10, seed=2)
        assert not np.array_equal(a.x1, b.x1)

    def test_linear_model_identity(self):
        sample = generate_scenario(DistributionSpec("gaussian", 1.0), ModelSpec("linear", 100.0), 10, seed=0)
        assert np.array_equal(sample.x2, 100.0 * sample.x1 + sample.e)
        assert np.allclose(sample.x2 - 100.0 * sample.x1, sample.e)

    @pytest.mark.parametrize("form", list(ModelForm))
    def test_model_identity_every_form(self, form):
        model = ModelSpec(form, 10.0)
        sample = generate_scenario(DistributionSpec("poisson", 3.0), model, 40, seed=5)
        assert np.array_equal(sample.x2, apply_model(model, sample.x1, sample.e))

    def test_lengths_and_readonly(self):
        sample = generate_scenario(DistributionSpec("gaussian", 1.0), ModelSpec("linear", 1.0), 12, seed=3)
        assert sample.n == 12
        for arr in (sample.x1, sample.x2, sample.x3, sample.e):
            assert len(arr) == 12
            assert not arr.flags.writeable

    def test_x3_independent_of_x1(self):
        sample = generate_scenario(DistributionSpec("gaussian", 1.0), ModelSpec("linear", 100.0),
                                   N_LARGE, seed=2024)
        r = np.corrcoef(sample.x1, sample.x3)[0, 1]
        assert abs(r) < 0.01

    def test_gaussian_noise_variant(self):
        sample = generate_scenario(DistributionSpec("poisson", 100.0), ModelSpec("linear", 1.0),
                                   N_LARGE, seed=8, noise_gaussian=True)
        assert sample.e.var() == pytest.approx(1.0, rel=0.03)
        assert sample.x1.mean() == pytest.approx(100.0, rel=0.01)
        assert sample.meta.noise_gaussian

    def test_too_few_samples(self):
        with pytest.raises(ParameterError):
            generate_scenario(DistributionSpec("gaussian", 1.0), ModelSpec("linear", 1.0), 1, seed=0)

    def test_to_frame_columns(self):
        sample = generate_scenario(DistributionSpec("gaussian", 1.0), ModelSpec("linear", 1.0), 5, seed=0)
        frame = sample.to_frame()
        assert list(frame.columns) == ["x1", "x2", "x3", "e"]
        assert len(frame) == 5

    def test_describe(self):
        sample = generate_scenario(DistributionSpec(DistributionFamily.LAPLACE, 2.0),
                                   ModelSpec("poly", 10.0), 5, seed=4)
        assert describe_scenario(sample.meta) == {
            "distribution": "laplace",
            "variance": 2.0,
            "model": "poly",
            "coef": 10.0,
            "seed": 4,
            "noise_gaussian": False,
        }


class TestDeriveSeed:

    def test_stable(self):
        assert derive_seed(0, "x1") == derive_seed(0, "x1")

    def test_tags_separate_streams(self):
        seeds = {derive_seed(0, tag) for tag in ("x1", "x3", "e")}
        assert len(seeds) == 3

    def test_fits_in_64_bits(self):
        for i in range(50):
            assert 0 <= derive_seed(i, "trial", i) < 2 ** 64
