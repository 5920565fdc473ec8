import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathmetric.report import (EmptyCorpus, FunctionReport, NonPositiveValue, corpus_stats,
                               loglog, read_jsonl, to_csv, to_jsonl, to_text)

counts = st.integers(1, 2 ** 200)


def report(acpath=8, npath=6, **kw):
    base = dict(file="a.c", function="f", line=1, acpath=acpath, npath=npath,
                opt_level=2, controlled=True)
    base.update(kw)
    return FunctionReport(**base)


def test_record_field_order_and_decimal_strings():
    d = report(2 ** 70, 3).to_dict()
    assert list(d) == ["file", "function", "line", "acpath", "npath", "opt_level",
                       "controlled", "verify", "thresholds"]
    assert d["acpath"] == "1180591620717411303424"
    assert d["thresholds"] == {"over80": True, "over200": True}


def test_missing_metric_is_null():
    d = report(acpath=None).to_dict()
    assert d["acpath"] is None and d["thresholds"] is None


@given(counts, counts, st.none() | counts)
def test_jsonl_round_trip(a, n, alpha):
    r = report(a, n, verify={"alpha": alpha, "match": alpha == a})
    assert read_jsonl(to_jsonl([r])) == [r]
    assert "e+" not in to_jsonl([r])


@given(counts)
def test_threshold_flags_match_comparison(a):
    t = report(a).thresholds
    assert t == {"over80": a > 80, "over200": a > 200}


def test_csv_and_text():
    r = report(300, 6, verify={"alpha": 300, "match": True})
    rows = to_csv([r]).splitlines()
    assert rows[0].startswith("file,function,line,acpath,npath")
    assert rows[1] == "a.c,f,1,300,6,2,True,300,True,True,True"
    assert to_text([r]) == "a.c:1: f acpath=300 npath=6 alpha=300 over200\n"


def test_loglog():
    assert loglog(1) == 0
    assert loglog(math.exp(math.e - 1)) == pytest.approx(1, abs=1e-15)


def test_identical_metrics():
    s = corpus_stats([(k, k) for k in (1, 3, 8, 100, 2 ** 40)])
    assert (s.pearson_r, s.mean_error, s.stddev_error) == (1.0, 0.0, 0.0)


def test_two_point_corpus():
    x = math.exp(math.e - 1)
    s = corpus_stats([(1, 1), (x, x)])
    assert s.pearson_r == 1.0
    assert sorted([loglog(1), loglog(x)]) == pytest.approx([0, 1])


def test_threshold_matrix():
    s = corpus_stats([(1, 1), (100, 1), (1, 100), (300, 300), (300, 100)])
    assert s.thresholds[80] == {"acpath_over_npath_within": 1, "acpath_within_npath_over": 1,
                                "both_over": 2, "both_within": 1}
    assert s.thresholds[200] == {"acpath_over_npath_within": 1, "acpath_within_npath_over": 0,
                                 "both_over": 1, "both_within": 3}


def test_non_positive_values():
    s = corpus_stats([(0, 5), (2, 3), (4, 4)])
    assert (s.n, s.excluded) == (2, 1)
    with pytest.raises(NonPositiveValue) as info:
        corpus_stats([(0, 5), (2, 3)], strict=True)
    assert info.value.excluded == 1


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        corpus_stats([])
    with pytest.raises(EmptyCorpus):
        corpus_stats([(0, 0)])


def test_huge_counts_do_not_overflow():
    s = corpus_stats([(2 ** 2000, 3), (5, 2 ** 1500), (7, 7)])
    assert -1 <= s.pearson_r <= 1
    assert all(math.isfinite(v) for v in s.skew_raw.values())


def test_raw_skew_ignores_scale():
    small = corpus_stats([(1, 1), (2, 2), (10, 10)]).skew_raw["acpath"]
    big = corpus_stats([(k * 2 ** 1100, 1) for k in (1, 2, 10)]).skew_raw["acpath"]
    assert big == pytest.approx(small)


@given(st.lists(st.tuples(counts, counts), min_size=2, max_size=40))
def test_statistics_are_bounded(pairs):
    s = corpus_stats(pairs)
    assert math.isnan(s.pearson_r) or -1 <= s.pearson_r <= 1
    assert s.stddev_error >= 0
    for cells in s.thresholds.values():
        assert sum(cells.values()) == len(pairs)
