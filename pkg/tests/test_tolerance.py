import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riskbounds import specfun
from riskbounds.concentration import Method, Provenance
from riskbounds.errors import DomainError
from riskbounds.tolerance import alpha_from_kfactor, k_factor, kfactor_bound


def coverage(n, k, alpha, reps, seed):
    """Fraction of normal samples whose mean + k sd exceeds the true (1 - alpha)-quantile."""
    rng = np.random.default_rng(seed)
    q = specfun.std_normal_quantile(1 - alpha)
    hits = 0
    chunk = 100_000
    for start in range(0, reps, chunk):
        m = min(chunk, reps - start)
        x = rng.standard_normal((m, n))
        hits += int(np.count_nonzero(x.mean(axis=1) + k * x.std(axis=1, ddof=1) >= q))
    return hits / reps


class TestKFactor:
    def test_reference_value(self):
        assert k_factor(10, 0.05, 0.95) == pytest.approx(2.911, abs=5e-4)

    @pytest.mark.slow
    def test_monte_carlo_coverage(self):
        k = k_factor(10, 0.05, 0.95)
        assert abs(coverage(10, k, 0.05, 1_000_000, seed=3) - 0.95) < 0.001

    def test_large_n_limit(self):
        assert k_factor(100_000, 0.05, 0.95) == pytest.approx(1.6449, abs=0.01)

    def test_median_confidence_large_n(self):
        assert k_factor(1000, 0.05, 0.5) == pytest.approx(1.6449, rel=0.02)

    def test_monotone(self):
        ks = [k_factor(10, 0.05, b) for b in (0.5, 0.7, 0.9, 0.95, 0.99)]
        assert all(b > a for a, b in zip(ks, ks[1:]))
        ks = [k_factor(n, 0.05, 0.95) for n in (3, 5, 10, 30, 100)]
        assert all(b < a for a, b in zip(ks, ks[1:]))
        ks = [k_factor(10, a, 0.95) for a in (0.01, 0.05, 0.1, 0.3)]
        assert all(b < a for a, b in zip(ks, ks[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            k_factor(1, 0.05, 0.95)
        with pytest.raises(DomainError):
            k_factor(10, 0.0, 0.95)


class TestAlphaFromKFactor:
    @given(st.integers(2, 200), st.floats(1e-4, 0.9), st.floats(0.5, 0.999))
    def test_round_trip(self, n, alpha, beta):
        k = k_factor(n, alpha, beta)
        assert alpha_from_kfactor(n, k, beta) == pytest.approx(alpha, abs=1e-6)

    def test_case2_threshold(self):
        k_obs = (10 - 2.18) / 2.67
        a = alpha_from_kfactor(38, k_obs, 0.95)
        assert 0.0 < a < 0.05
        assert k_factor(38, a, 0.95) == pytest.approx(k_obs, abs=1e-6)

    @pytest.mark.slow
    def test_case2_coverage(self):
        k_obs = (10 - 2.18) / 2.67
        a = alpha_from_kfactor(38, k_obs, 0.95)
        assert abs(coverage(38, k_obs, a, 400_000, seed=5) - 0.95) < 0.0015

    def test_nonpositive_score(self):
        assert alpha_from_kfactor(10, 0.0, 0.95) >= 0.5
        rb = kfactor_bound(5.0, 1.0, 10, 4.0, 0.95)
        assert rb.alpha >= 0.5 and rb.vacuous
        assert rb.method is Method.KFACTOR and rb.confidence == 0.95
        assert rb.provenance is Provenance.PLUGIN_MOMENTS

    def test_extremes_clamp(self):
        assert alpha_from_kfactor(10, 50.0, 0.95) == pytest.approx(1e-10)
        assert alpha_from_kfactor(10, -50.0, 0.95) == pytest.approx(1 - 1e-10)

    def test_more_conservative_than_gauss(self):
        z = (10 - 2.18) / 2.67
        assert alpha_from_kfactor(38, z, 0.95) > specfun.std_normal_sf(z)

    def test_nonfinite(self):
        with pytest.raises(DomainError):
            alpha_from_kfactor(10, math.inf, 0.95)
