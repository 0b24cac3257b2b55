from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from insetedge.query import build_index, closest, extremes, linear_closest, parse_target, top_k
from insetedge.sweep import InsetRecord, collect
from insetedge.tree import generate


def values(records):
    return [r.dprime for r in records]


@pytest.fixture
def tiny():
    # dprime values {1, 2, 2}
    recs = [InsetRecord(0, 3, 4, 2), InsetRecord(1, 2, 3, 1), InsetRecord(0, 2, 3, 2)]
    return build_index(recs, 4)


@pytest.fixture
def p5_index(p5):
    return build_index(collect(p5), 5)


def test_build_index(p4, star3, p2):
    assert values(build_index(collect(p4), 4).records) == [2, 2, 2]
    assert values(build_index(collect(star3), 4).records) == [1, 1, 1]
    assert len(build_index(collect(p2), 2)) == 0


def test_build_index_sort_order(tiny):
    assert [(r.dprime, r.x, r.y) for r in tiny.records] == [(1, 1, 2), (2, 0, 2), (2, 0, 3)]


def test_build_index_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        build_index([InsetRecord(0, 2, 3, 1), InsetRecord(0, 2, 3, 1)], 4)


def test_closest_nearest(tiny):
    res = closest(tiny, Fraction(7, 5))
    assert [(r.x, r.y) for r in res.records] == [(1, 2)]
    assert res.deviation == Fraction(2, 5)


def test_closest_midpoint_tie(tiny):
    res = closest(tiny, "1.5")
    assert len(res.records) == 3
    assert [(r.x, r.y) for r in res.records] == [(0, 2), (0, 3), (1, 2)]
    assert res.deviation == Fraction(1, 2)


def test_closest_adprime(p5_index):
    res = closest(p5_index, Fraction(1, 2), metric="adprime")
    assert [(r.x, r.y, r.dprime) for r in res.records] == [(0, 4, 5)]
    assert res.deviation == 0


def test_closest_outside_range(p5_index):
    assert [r.dprime for r in closest(p5_index, 100).records] == [5]
    assert {r.dprime for r in closest(p5_index, -3).records} == {3}


def test_closest_errors(tiny):
    with pytest.raises(ValueError):
        closest(build_index([], 2), 1)
    with pytest.raises(ValueError):
        closest(tiny, 1, metric="hops")
    with pytest.raises(ValueError):
        parse_target("one")


def test_top_k(p4, p5_index):
    p4_index = build_index(collect(p4), 4)
    assert [(r.x, r.y) for r in top_k(p4_index, 1, "max")] == [(0, 2)]
    assert [(r.x, r.y, r.dprime) for r in top_k(p5_index, 1, "max")] == [(0, 4, 5)]
    assert top_k(p5_index, 6, "max") == sorted(p5_index.records, key=lambda r: (-r.dprime, r.x, r.y))
    assert top_k(p5_index, 2, "min") == list(p5_index.records[:2])
    for bad in (0, 7):
        with pytest.raises(ValueError):
            top_k(p5_index, bad)


def test_extremes(p4, p5, star3, p5_index):
    # brute force on P5: (1,3) and (3,5) give 3, (2,4) gives 4
    brute = {(x, y): oracles.dprime(5, p5.edges, x, y) for x, y in [(0, 2), (1, 3), (2, 4), (0, 4)]}
    assert brute == {(0, 2): 3, (1, 3): 4, (2, 4): 3, (0, 4): 5}
    hi, lo = extremes(p5_index)
    assert [(r.x, r.y) for r in hi] == [(0, 4)]
    assert sorted((r.x, r.y, r.dprime) for r in lo) == [(0, 2, 3), (2, 4, 3)]
    for t in (p4, star3):
        idx = build_index(collect(t), 4)
        hi, lo = extremes(idx)
        assert hi == lo == list(idx.records)


def test_metrics_share_ordering():
    t = generate("random", 30, seed=2)
    idx = build_index(collect(t), t.n)
    by_dp = sorted(idx.records, key=lambda r: (r.dprime, r.x, r.y))
    by_ad = sorted(idx.records, key=lambda r: (Fraction(r.dprime, idx.pairs), r.x, r.y))
    assert by_dp == by_ad == list(idx.records)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(3, 30),
    st.integers(0, 2**32),
    st.fractions(min_value=-5, max_value=400, max_denominator=20),
    st.sampled_from(["dprime", "adprime"]),
)
def test_closest_matches_linear_scan(n, seed, target, metric):
    t = generate("random", n, seed)
    recs = collect(t)
    idx = build_index(recs, n)
    if metric == "adprime":
        target = target / idx.pairs
    assert list(closest(idx, target, metric).records) == linear_closest(recs, target, metric, n)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=40))
def test_index_is_permutation(vals):
    recs = [InsetRecord(i, i + 2, 3, v) for i, v in enumerate(vals)]
    idx = build_index(recs, 50)
    assert sorted(idx.records, key=lambda r: r.x) == recs


def test_build_index_wide_values_fall_back():
    big = 2**61
    recs = [InsetRecord(0, 3, 4, big + 1), InsetRecord(1, 2, 3, big), InsetRecord(0, 2, 3, big + 1)]
    idx = build_index(recs, 4)
    assert [(r.dprime - big, r.x, r.y) for r in idx.records] == [(0, 1, 2), (1, 0, 2), (1, 0, 3)]
