import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from unifit import (
    ad_statistic,
    cvm_statistic,
    hs_kernel,
    hs_projection,
    hs_statistic,
    ks_statistic,
    make_sample,
    qc_statistic,
)
from unifit.competitors import _ad_batch, _cvm_batch, _hs_batch, _ks_batch, _qc_batch
from unifit.errors import DegenerateValue, SampleTooLarge, SampleTooSmall
from unifit.montecarlo import null_sample_matrix


# ---------------------------------------------------------------------------
# oracles evaluating the sup/integral definitions directly
# ---------------------------------------------------------------------------

def ks_oracle(values):
    """sup_t |F_n(t) − t| checked at a dense grid plus both sides of jumps."""
    xs = np.sort(values)
    n = len(xs)

    def fn(t):
        return np.searchsorted(xs, t, side="right") / n

    def fn_left(t):
        return np.searchsorted(xs, t, side="left") / n

    candidates = np.concatenate([np.linspace(0, 1, 10_001), xs])
    return max(
        float(np.max(np.abs(fn(candidates) - candidates))),
        float(np.max(np.abs(fn_left(candidates) - candidates))),
    )


def _piecewise_quad(values, integrand):
    xs = np.sort(values)
    pts = np.concatenate([[0.0], xs, [1.0]])
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            v, _ = integrate.quad(integrand, a, b, limit=200)
            total += v
    return total


def ad_oracle(values):
    xs = np.sort(values)
    n = len(xs)

    def integrand(t):
        fn = np.searchsorted(xs, t, side="right") / n
        return (fn - t) ** 2 / (t * (1.0 - t))

    return n * _piecewise_quad(values, integrand)


def cvm_oracle(values):
    xs = np.sort(values)
    n = len(xs)

    def integrand(t):
        fn = np.searchsorted(xs, t, side="right") / n
        return (fn - t) ** 2

    return n * _piecewise_quad(values, integrand)


def qc_oracle(values):
    """Via the pairwise-difference identity Σ_i (2i−n−1) X_(i) = Σ_{i<j} |X_i − X_j|."""
    x = np.asarray(values)
    n = len(x)
    gini = sum(abs(a - b) for a, b in itertools.combinations(x, 2))
    return abs(6.0 / n**2 * gini - 1.0)


# ---------------------------------------------------------------------------


class TestKolmogorovSmirnov:
    def test_examples(self):
        assert_allclose(ks_statistic(make_sample([0.5])), 0.5)
        assert_allclose(ks_statistic(make_sample([0.25, 0.75])), 0.25)
        n = 10
        grid = (2 * np.arange(1, n + 1) - 1) / (2 * n)
        assert_allclose(ks_statistic(make_sample(grid)), 0.05)

    def test_oracle(self, rng):
        for _ in range(12):
            values = rng.random(int(rng.integers(1, 21)))
            assert_allclose(ks_statistic(make_sample(values)), ks_oracle(values),
                            atol=1e-6)

    def test_extreme_insertion_forces_deviation(self, rng):
        # An observation at 0 or 1 pins a jump of size >= 1/(n+1) at that
        # endpoint, so the sup-distance cannot fall below it. (The stronger
        # claim "never decreases the statistic" is false: [0.9] has D = 0.9
        # but inserting 0.0 rebalances the ECDF down to D = 0.5.)
        for _ in range(40):
            values = rng.random(int(rng.integers(1, 15)))
            n = len(values)
            for extreme in (0.0, 1.0):
                grown = ks_statistic(make_sample(np.append(values, extreme)))
                assert grown >= 1.0 / (n + 1) - 1e-12
        assert ks_statistic(make_sample([0.9])) == pytest.approx(0.9)
        assert ks_statistic(make_sample([0.0, 0.9])) == pytest.approx(0.5)


class TestAndersonDarling:
    def test_singleton(self):
        assert_allclose(ad_statistic(make_sample([0.5])), -1 + 2 * np.log(2))

    def test_two_point_oracle_value(self):
        # frozen from the quadrature oracle (agrees with the sorted form)
        assert_allclose(ad_statistic(make_sample([0.25, 0.75])), 0.2493405784752332,
                        rtol=1e-12)

    def test_oracle(self, rng):
        for _ in range(10):
            values = rng.random(int(rng.integers(1, 21)))
            assert_allclose(ad_statistic(make_sample(values)), ad_oracle(values),
                            atol=1e-6)

    def test_degenerate_guard(self):
        s = make_sample([0.0, 0.4])
        ad_statistic(s)  # clamped by default
        with pytest.raises(DegenerateValue):
            ad_statistic(s, clamp=False)


class TestCramerVonMises:
    def test_examples(self):
        assert_allclose(cvm_statistic(make_sample([0.5])), 1 / 12)
        n = 7
        grid = (2 * np.arange(1, n + 1) - 1) / (2 * n)
        assert_allclose(cvm_statistic(make_sample(grid)), 1 / (12 * n))

    def test_oracle(self, rng):
        for _ in range(10):
            values = rng.random(int(rng.integers(1, 21)))
            assert_allclose(cvm_statistic(make_sample(values)), cvm_oracle(values),
                            atol=1e-6)


class TestMaxCorrelation:
    def test_examples(self):
        assert_allclose(qc_statistic(make_sample([0.0, 1.0])), 0.5)
        assert_allclose(qc_statistic(make_sample([0.3] * 5)), 1.0)
        n = 10
        assert_allclose(qc_statistic(make_sample(np.arange(1, n + 1) / (n + 1))), 0.1)

    def test_oracle(self, rng):
        for _ in range(10):
            values = rng.random(int(rng.integers(1, 21)))
            assert_allclose(qc_statistic(make_sample(values)), qc_oracle(values),
                            atol=1e-10)


class TestHSKernel:
    def test_constant_vanishes(self):
        assert hs_kernel(0.3, 0.3, 0.3, 0.3) == 0.0

    def test_alternating_value(self):
        # 4/36 from the squared differences minus 1/6 from the middle pairing
        assert_allclose(hs_kernel(0.0, 1.0, 0.0, 1.0), -1 / 18)

    def test_pair_swap_invariance(self, rng):
        for _ in range(20):
            a, b, c, d = rng.random(4)
            assert_allclose(hs_kernel(a, b, c, d), hs_kernel(c, d, a, b), atol=1e-15)

    def test_full_symmetry(self, rng):
        vals = rng.random(4)
        base = hs_kernel(*vals)
        for perm in itertools.permutations(vals):
            assert_allclose(hs_kernel(*perm), base, atol=1e-15)


class TestHSStatistic:
    def test_single_subset_is_kernel(self, rng):
        vals = rng.random(4)
        expected = hs_kernel(*vals)
        s = make_sample(vals)
        assert_allclose(hs_statistic(s, "naive"), expected, atol=1e-15)
        assert_allclose(hs_statistic(s, "fast"), expected, rtol=1e-10, atol=1e-15)

    def test_fast_equals_enumeration(self, rng):
        for _ in range(25):
            n = int(rng.integers(4, 16))
            s = make_sample(rng.random(n))
            assert_allclose(hs_statistic(s, "fast"), hs_statistic(s, "naive"),
                            atol=1e-10)

    def test_size_guards(self):
        with pytest.raises(SampleTooSmall):
            hs_statistic(make_sample([0.1, 0.2, 0.3]))
        with pytest.raises(SampleTooLarge):
            hs_statistic(make_sample(np.linspace(0.01, 0.99, 121)))

    def test_null_mean_is_zero(self):
        rows = null_sample_matrix(20, 100_000, seed=1802)
        stats = _hs_batch(rows)
        se = stats.std(ddof=1) / np.sqrt(stats.size)
        assert abs(stats.mean()) < 4 * se


class TestHSProjection:
    def test_corners(self):
        assert hs_projection(0.0, 0.0) == 0.0
        assert_allclose(hs_projection(1.0, 1.0), 0.0, atol=1e-15)
        assert_allclose(hs_projection(0.5, 0.5), 1 / 288)

    def test_degeneracy(self):
        for s1 in (0.2, 0.7):
            val, _ = integrate.quad(lambda s2: hs_projection(s1, s2), 0, 1,
                                    points=[s1], limit=100)
            assert abs(val) < 1e-12

    def test_matches_conditional_expectation(self, rng):
        # E[kernel(s1, s2, U, V)] by adaptive quadrature equals the closed form
        for s1, s2 in [(0.3, 0.8), (0.55, 0.55)]:
            val, _ = integrate.dblquad(lambda v, u: hs_kernel(s1, s2, u, v),
                                       0, 1, 0, 1, epsabs=1e-10)
            assert_allclose(val, hs_projection(s1, s2), atol=1e-7)


def test_permutation_invariance(rng):
    values = rng.random(12)
    shuffled = values[rng.permutation(12)]
    for stat in (ks_statistic, ad_statistic, cvm_statistic, qc_statistic, hs_statistic):
        assert_allclose(stat(make_sample(values)), stat(make_sample(shuffled)),
                        rtol=1e-12, atol=1e-14)


def test_batch_matches_scalar(rng):
    rows = np.sort(rng.random((40, 15)), axis=1)
    pairs = [
        (_ks_batch, ks_statistic), (_ad_batch, ad_statistic),
        (_cvm_batch, cvm_statistic), (_qc_batch, qc_statistic),
        (_hs_batch, hs_statistic),
    ]
    for batch, scalar in pairs:
        got = batch(rows)
        expected = [scalar(make_sample(row)) for row in rows]
        assert_allclose(got, expected, rtol=1e-10, atol=1e-14)
