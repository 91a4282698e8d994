import math

import numpy as np
import pytest

from riskbounds import distributions as dist
from riskbounds.bootstrap import BootstrapConfig
from riskbounds.concentration import Method
from riskbounds.errors import DomainError
from riskbounds.simulation import (BOOTSTRAP_METHODS, PLUGIN_METHODS, StudyConfig,
                                   known_moments_study, sampling_study,
                                   wilks_nonconservative_bound)

SPEC = dist.lognormal_with_mode(210.0, 70.0)


EXACT_MOMENT_ROWS = {
    # sd of the law: (Gauss, BC, CM, VD) at the true 95% quantile, two decimals
    20.0: (0.05, 0.27, 0.14, 0.12),
    30.0: (0.04, 0.25, 0.13, 0.11),
    50.0: (0.04, 0.23, 0.12, 0.10),
    70.0: (0.03, 0.23, 0.12, 0.10),
}
EXACT_MOMENT_CELLS = []
for _sd, _row in EXACT_MOMENT_ROWS.items():
    for _m, _want in zip(PLUGIN_METHODS, _row):
        marks = ()
        if (_sd, _m) == (50.0, Method.BC):
            # the exact value is 0.23522 (checked against scipy), which rounds to 0.24
            marks = pytest.mark.xfail(strict=True, reason="reference cell inconsistent")
        EXACT_MOMENT_CELLS.append(pytest.param(_sd, _m, _want, marks=marks, id=f"{_sd:g}-{_m.value}"))


class TestKnownMoments:
    @pytest.mark.parametrize("sd,method,expected", EXACT_MOMENT_CELLS)
    def test_exact_moment_cell(self, sd, method, expected):
        row = {r.spec.sd: r for r in known_moments_study()}[sd]
        assert abs(row.alphas[method] - expected) <= 0.005

    def test_against_scipy(self):
        from scipy import stats
        for row in known_moments_study()[1:]:
            ln = dist.lognormal_internal(row.spec)
            q = stats.lognorm.ppf(0.95, ln.log_sd, scale=math.exp(ln.log_mean))
            assert row.threshold == pytest.approx(q, rel=1e-12)
            t = q - row.spec.mean
            assert row.alphas[Method.BC] == pytest.approx(1 / (1 + t * t / row.spec.sd ** 2),
                                                          rel=1e-10)

    def test_gauss_exact_on_normal(self):
        row = known_moments_study()[0]
        assert row.alphas[Method.GAUSS] == pytest.approx(0.05, abs=1e-14)
        assert row.true_alpha == pytest.approx(0.05, abs=1e-14)


class TestSamplingStudy:
    def test_single_replication(self):
        res = sampling_study(StudyConfig(SPEC, 10, replications=1, seed=3))
        assert all(p in (0.0, 1.0) for p in res.proportion_nonconservative.values())

    def test_proportions_ordered(self):
        for seed in range(3):
            res = sampling_study(StudyConfig(SPEC, 10, replications=400, seed=seed))
            p = res.proportion_nonconservative
            assert all(0.0 <= v <= 1.0 for v in p.values())
            assert p[Method.BC] <= p[Method.CM] <= p[Method.VD]

    def test_chunking_and_workers_do_not_matter(self):
        cfg = StudyConfig(SPEC, 10, replications=300, seed=11)
        a = sampling_study(cfg, workers=1, chunk_size=300)
        b = sampling_study(cfg, workers=2, chunk_size=37)
        for m in cfg.methods:
            assert np.array_equal(a.estimates[m], b.estimates[m])

    def test_bootstrap_arm_deterministic(self):
        cfg = StudyConfig(SPEC, 10, replications=20, methods=BOOTSTRAP_METHODS,
                          bootstrap=BootstrapConfig(500, 0.95), seed=5)
        a = sampling_study(cfg, chunk_size=20)
        b = sampling_study(cfg, workers=2, chunk_size=7)
        for m in BOOTSTRAP_METHODS:
            assert np.array_equal(a.estimates[m], b.estimates[m])

    def test_bootstrap_more_conservative(self):
        plug = sampling_study(StudyConfig(SPEC, 10, replications=60, seed=2))
        boot = sampling_study(StudyConfig(SPEC, 10, replications=60, methods=PLUGIN_METHODS,
                                          bootstrap=BootstrapConfig(500, 0.95), seed=2))
        for m in (Method.BC, Method.CM, Method.VD):
            assert np.mean(boot.estimates[m] >= plug.estimates[m]) >= 0.9

    def test_standard_error(self):
        res = sampling_study(StudyConfig(SPEC, 10, replications=200, seed=1))
        p = res.proportion_nonconservative[Method.VD]
        assert res.standard_error(Method.VD) == pytest.approx(math.sqrt(p * (1 - p) / 200))

    def test_invalid(self):
        with pytest.raises(DomainError):
            StudyConfig(SPEC, 1)
        with pytest.raises(DomainError):
            StudyConfig(SPEC, 10, replications=0)


class TestWilksNonconservative:
    def test_values(self):
        assert wilks_nonconservative_bound(10, 0.95) == pytest.approx(0.599, abs=5e-4)
        assert wilks_nonconservative_bound(30, 0.95) == pytest.approx(0.215, abs=5e-4)
        assert wilks_nonconservative_bound(10, 1.0) == 1.0

    def test_matches_simulation(self):
        rng = np.random.default_rng(0)
        q = dist.quantile(SPEC, 0.95)
        ln = dist.lognormal_internal(SPEC)
        maxima = np.exp(rng.normal(ln.log_mean, ln.log_sd, (100_000, 10))).max(axis=1)
        assert abs(np.mean(maxima < q) - 0.599) < 0.005
