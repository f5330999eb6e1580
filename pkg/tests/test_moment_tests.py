import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from unifit import kernel_phi, make_sample, projection_phi_star, t_statistic
from unifit.errors import ArityMismatch, BadParameter, InvalidIndices, SampleTooLarge, SampleTooSmall
from unifit.moment_tests import (
    NAIVE_CAP,
    _t_batch,
    characterization_residual,
    projection_phi_star_general,
)
from unifit.montecarlo import null_sample_matrix


class TestCharacterizationResidual:
    def test_uniform_moments_cancel(self):
        # E X²_{1,1} = 1/3, E X_{2,2} = 2/3
        assert_allclose(characterization_residual(1, 1, 1 / 3, 2 / 3), 0.0, atol=1e-15)
        # E X²_{1,2} = 1/6, E X_{2,3} = 1/2
        assert_allclose(characterization_residual(1, 2, 1 / 6, 1 / 2), 0.0, atol=1e-15)

    def test_non_uniform_moments_leave_residual(self):
        # density 2x: E X² = 1/2 and E max(X1, X2) = 4/5, giving 1/30
        assert_allclose(characterization_residual(1, 1, 0.5, 0.8), 1 / 30, atol=1e-15)
        # plain arithmetic on arbitrary inputs
        assert_allclose(characterization_residual(1, 1, 0.2, 2 / 3), -2 / 15, atol=1e-15)

    def test_invalid_indices(self):
        with pytest.raises(InvalidIndices):
            characterization_residual(3, 2, 0.1, 0.1)
        with pytest.raises(InvalidIndices):
            characterization_residual(0, 2, 0.1, 0.1)


class TestKernel:
    def test_m1_examples(self):
        assert_allclose(kernel_phi(1, [0.2, 0.8]), 0.34 - 0.8 + 1 / 3)
        assert_allclose(kernel_phi(1, [0.5, 0.5]), 0.25 - 0.5 + 1 / 3)

    def test_m2_example(self):
        assert_allclose(kernel_phi(2, [0.1, 0.5, 0.9]),
                        (2 * 0.01 + 0.25) / 3 - 0.5 * 2 / 3 + 1 / 6)

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            kernel_phi(1, [0.1, 0.2, 0.3])
        with pytest.raises(ArityMismatch):
            kernel_phi(2, [0.1, 0.2])
        with pytest.raises(BadParameter):
            kernel_phi(3, [0.1, 0.2, 0.3, 0.4])

    @given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=3))
    def test_m2_symmetric(self, args):
        base = kernel_phi(2, args)
        for perm in itertools.permutations(args):
            assert kernel_phi(2, perm) == pytest.approx(base, abs=1e-12)

    def test_zero_mean_under_uniformity(self):
        # E Phi_1(s, U) = 0: average the kernel against quadrature in one slot
        for s in (0.0, 0.3, 0.9):
            val, _ = integrate.quad(lambda u: kernel_phi(1, [s, u]), 0, 1, points=[s])
            assert abs(val) < 1e-12


class TestTStatistic:
    def test_single_pair_is_kernel(self):
        s = make_sample([0.2, 0.8])
        assert_allclose(t_statistic(s, 1), kernel_phi(1, [0.2, 0.8]))
        assert_allclose(t_statistic(s, 1, "naive"), kernel_phi(1, [0.2, 0.8]))

    def test_three_point_oracle(self):
        # mean of the kernel over the three pairs, computed by hand
        s = make_sample([0.25, 0.5, 0.75])
        assert_allclose(t_statistic(s, 1, "naive"), -1 / 24, atol=1e-15)
        assert_allclose(t_statistic(s, 1, "fast"), -1 / 24, atol=1e-14)

    def test_single_triple_is_kernel(self):
        s = make_sample([0.15, 0.6, 0.95])
        expected = kernel_phi(2, [0.15, 0.6, 0.95])
        assert_allclose(t_statistic(s, 2, "naive"), expected)
        assert_allclose(t_statistic(s, 2, "fast"), expected, rtol=1e-12)

    @pytest.mark.parametrize("m", [1, 2])
    def test_fast_equals_naive(self, m, rng):
        for _ in range(60):
            n = int(rng.integers(m + 2, 31))
            s = make_sample(rng.random(n))
            assert_allclose(t_statistic(s, m, "fast"), t_statistic(s, m, "naive"),
                            rtol=1e-12, atol=1e-15)

    def test_size_guards(self):
        with pytest.raises(SampleTooSmall):
            t_statistic(make_sample([0.5]), 1)
        with pytest.raises(SampleTooSmall):
            t_statistic(make_sample([0.5, 0.6]), 2)
        big = make_sample(np.linspace(0.01, 0.99, NAIVE_CAP[2] + 1))
        with pytest.raises(SampleTooLarge):
            t_statistic(big, 2, "naive")
        t_statistic(big, 2, "fast")  # no cap on the closed form

    def test_mode_validation(self):
        with pytest.raises(BadParameter):
            t_statistic(make_sample([0.1, 0.2]), 1, "exact")

    @pytest.mark.parametrize("m", [1, 2])
    def test_null_mean_is_zero(self, m):
        # the kernel has zero mean under uniformity, so T is exactly unbiased
        rows = null_sample_matrix(20, 100_000, seed=1801)
        stats = _t_batch(rows, m)
        se = stats.std(ddof=1) / np.sqrt(stats.size)
        assert abs(stats.mean()) < 4 * se


class TestProjection:
    def test_m1_example(self):
        assert_allclose(projection_phi_star(1, 0.5, 0.5), 0.25 / 2 + 0.25 / 2 - 0.5 + 1 / 3)

    def test_m1_closed_form(self, rng):
        s, t = rng.random(50), rng.random(50)
        expected = s**2 / 2 + t**2 / 2 - np.maximum(s, t) + 1 / 3
        assert_allclose(projection_phi_star(1, s, t), expected, atol=1e-14)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_symmetry(self, m, rng):
        s, t = rng.random(200), rng.random(200)
        assert_allclose(projection_phi_star(m, s, t), projection_phi_star(m, t, s),
                        atol=1e-14)

    @pytest.mark.parametrize("m", [1, 2])
    def test_specialised_matches_general(self, m, rng):
        s, t = rng.random(100), rng.random(100)
        assert_allclose(projection_phi_star(m, s, t),
                        projection_phi_star_general(m, s, t), atol=1e-13)
        assert_allclose(projection_phi_star(m, 0.0, 0.0),
                        projection_phi_star_general(m, 0.0, 0.0), atol=1e-15)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_degenerate_at_spot_points(self, m):
        for t in (0.0, 0.3, 1.0):
            val, _ = integrate.quad(lambda s: projection_phi_star(m, s, t), 0, 1,
                                    points=[t], limit=100)
            assert abs(val) < 1e-10
