import math
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from riskbounds.errors import DataError, DomainError
from riskbounds.estimation import Sample, order_statistic, sample_sd, summarize

finite = st.floats(-1e6, 1e6, allow_nan=False)


class TestSample:
    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(DataError):
            Sample(())
        with pytest.raises(DataError):
            Sample((1.0, float("nan")))

    def test_unit_label(self):
        s = Sample.of([1, 2], "activity")
        assert s.n == 2 and len(s) == 2 and s.unit_label == "activity"


class TestSummarize:
    def test_small(self):
        m = summarize(Sample.of([1, 2, 3]))
        assert (m.mean, m.sd, m.median) == (2.0, 1.0, 2.0)

    def test_textbook(self):
        m = summarize(Sample.of([2, 4, 4, 4, 5, 5, 7, 9]))
        assert m.mean == 5.0
        assert m.sd == pytest.approx(math.sqrt(32 / 7), rel=1e-15)
        assert m.median == 4.5
        assert (m.min, m.max) == (2.0, 9.0)

    def test_single_value(self):
        with pytest.raises(DataError):
            summarize(Sample.of([5]))
        with pytest.raises(DataError):
            sample_sd([5.0])

    def test_constant(self):
        assert summarize(Sample.of([0.1] * 7)).sd == 0.0

    @given(st.lists(finite, min_size=2, max_size=40), st.randoms())
    def test_permutation_invariant(self, values, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        a, b = summarize(Sample.of(values)), summarize(Sample.of(shuffled))
        assert a.mean == b.mean and a.median == b.median
        assert a.sd == pytest.approx(b.sd, rel=1e-12, abs=1e-12)

    @given(st.lists(finite, min_size=2, max_size=40))
    def test_matches_statistics_module(self, values):
        m = summarize(Sample.of(values))
        assert m.mean == pytest.approx(statistics.fmean(values), rel=1e-12, abs=1e-9)
        assert m.sd == pytest.approx(statistics.stdev(values), rel=1e-9, abs=1e-9)
        assert m.median == statistics.median(values)


class TestOrderStatistic:
    def test_ends(self):
        s = Sample.of([3.0, 156.67, 0.83, 12.0])
        assert order_statistic(s, 4) == 156.67
        assert order_statistic(s, 1) == 0.83

    def test_duplicates(self):
        s = Sample.of([2.0, 1.0, 2.0, 3.0])
        assert [order_statistic(s, r) for r in range(1, 5)] == [1.0, 2.0, 2.0, 3.0]

    def test_rank_out_of_range(self):
        with pytest.raises(DomainError):
            order_statistic(Sample.of([1.0, 2.0]), 3)
