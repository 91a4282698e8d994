import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from riskbounds.errors import DomainError
from riskbounds.estimation import Sample
from riskbounds.wilks import (WilksPlan, wilks_assess, wilks_confidence, wilks_confidence_direct,
                              wilks_gamma, wilks_min_n, wilks_plan)


def brute_force_min_n(gamma, beta, order):
    n = order
    while wilks_confidence_direct(n, n - order + 1, gamma) < beta:
        n += 1
    return n


class TestConfidence:
    @given(st.integers(1, 80), st.floats(0.0, 1.0))
    def test_rank_n_closed_form(self, n, gamma):
        assert wilks_confidence(n, n, gamma) == pytest.approx(1 - gamma ** n, abs=1e-13)

    @pytest.mark.parametrize("n,rank,gamma", [(21, 21, 0.867), (21, 20, 0.793), (38, 37, 0.881)])
    def test_case_study_values(self, n, rank, gamma):
        assert wilks_confidence(n, rank, gamma) == pytest.approx(0.950, abs=5e-4)

    def test_against_direct_sum(self):
        for n in range(1, 61):
            for rank in range(1, n + 1):
                for gamma in (0.5, 0.9, 0.95, 0.99):
                    assert abs(wilks_confidence(n, rank, gamma)
                               - wilks_confidence_direct(n, rank, gamma)) < 1e-10

    @given(st.integers(2, 60), st.data())
    def test_monotone(self, n, data):
        rank = data.draw(st.integers(1, n - 1))
        g1, g2 = sorted(data.draw(st.lists(st.floats(0.05, 0.95), min_size=2, max_size=2)))
        at_g1, at_g2 = wilks_confidence(n, rank, g1), wilks_confidence(n, rank, g2)
        assert at_g2 <= at_g1
        if g2 - g1 > 1e-6 and at_g2 < 1.0 - 1e-12:
            assert at_g2 < at_g1
        lower, higher = wilks_confidence(n, rank, g1), wilks_confidence(n, rank + 1, g1)
        assert lower <= higher
        if lower < 1.0 - 1e-12:
            # strict until the CDF saturates at 1 in double precision
            assert lower < higher


class TestMinN:
    @pytest.mark.parametrize("gamma,beta,n", [
        (0.9, 0.5, 7), (0.9, 0.9, 22), (0.9, 0.95, 29), (0.95, 0.5, 14), (0.95, 0.9, 45),
        (0.95, 0.95, 59), (0.99, 0.95, 299), (0.99, 0.99, 459),
    ])
    def test_first_order(self, gamma, beta, n):
        assert wilks_min_n(gamma, beta) == n

    def test_second_order(self):
        assert wilks_min_n(0.95, 0.95, order=2) == brute_force_min_n(0.95, 0.95, 2) == 93

    @given(st.floats(0.5, 0.99), st.floats(0.5, 0.99), st.integers(1, 4))
    def test_boundary_consistency(self, gamma, beta, order):
        n = wilks_min_n(gamma, beta, order)
        assert wilks_confidence(n, n - order + 1, gamma) >= beta
        if n - 1 >= order:
            assert wilks_confidence(n - 1, n - order, gamma) < beta


class TestGamma:
    @pytest.mark.parametrize("n,rank,beta,expected", [
        (21, 21, 0.95, 0.8671), (38, 38, 0.95, 0.9242), (21, 20, 0.90, 0.827),
    ])
    def test_case_study_values(self, n, rank, beta, expected):
        assert wilks_gamma(n, rank, beta) == pytest.approx(expected, abs=5e-4)

    @given(st.integers(2, 100), st.data(), st.floats(0.05, 0.999))
    def test_boundary_consistency(self, n, data, beta):
        rank = data.draw(st.integers(1, n))
        g = wilks_gamma(n, rank, beta)
        assert wilks_confidence(n, rank, g) >= beta
        if g + 1e-6 <= 1:
            assert wilks_confidence(n, rank, g + 1e-6) < beta


class TestPlan:
    def test_plan(self):
        p = wilks_plan(21, 2, 0.95)
        assert (p.n, p.order, p.rank) == (21, 2, 20)
        assert p.alpha == pytest.approx(0.207, abs=1e-3)
        assert p.confidence >= 0.95

    def test_invalid(self):
        with pytest.raises(DomainError):
            wilks_plan(5, 6, 0.95)
        with pytest.raises(DomainError):
            WilksPlan(21, 1, 20, 0.8, 0.95)
        with pytest.raises(DomainError):
            WilksPlan(21, 1, 21, 0.99, 0.95)


class TestAssess:
    def test_case1_style(self):
        values = [float(v) for v in range(1, 21)] + [156.67]
        wa = wilks_assess(Sample.of(values), 1, 0.95)
        assert wa.threshold == 156.67
        assert wa.alpha == pytest.approx(0.133, abs=5e-4)

    def test_case2_style_at_stated_confidence(self):
        values = [0.02 + 0.1 * i for i in range(37)] + [13.97]
        wa = wilks_assess(Sample.of(values), 1, 0.78)
        assert wa.threshold == 13.97
        assert wa.alpha == pytest.approx(0.039062, abs=1e-5)

    def test_order_n(self):
        s = Sample.of([3.0, 1.0, 2.0, 5.0])
        wa = wilks_assess(s, 4, 0.95)
        assert wa.threshold == 1.0
        assert wa.alpha > 0.5

    def test_order_too_large(self):
        with pytest.raises(DomainError):
            wilks_assess(Sample.of([1.0, 2.0]), 3, 0.95)


class TestTruncatedConfidenceRows:
    """The reference lower confidence rows are 1 - (1 - a)^n at the VD risk a, truncated."""

    @pytest.mark.parametrize("n,vd_alpha,stated", [(21, 0.071, 0.78), (38, 0.040, 0.78)])
    def test_first_order_rows(self, n, vd_alpha, stated):
        beta = wilks_confidence(n, n, 1 - vd_alpha)
        assert math.floor(beta * 100) / 100 == stated

    def test_second_order_row(self):
        beta = wilks_confidence(38, 37, 1 - 0.147)
        assert math.floor(beta * 100) / 100 == 0.98
        beta = wilks_confidence(21, 20, 1 - 0.427)
        assert math.floor(beta * 1000) / 1000 == 0.999
