import io
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcsketch import (
    BcsSketcher,
    BenchReport,
    ResultSet,
    SparseDataset,
    allpairs_above,
    gen_allpairs_dataset,
    gen_knn_dataset,
    query_above,
    result_accuracy,
    run_benchmark,
)
from bcsketch.search import CSV_FIELDS, ExactScorer, SearchMode, SketchScorer, exact_pair_scorer
from bcsketch.similarity import jaccard_counts

HAND = SparseDataset.from_sets(8, [[1, 2, 3], [1, 2, 4], [5, 6], [1, 2, 3, 4], [6, 7, 8]])


def brute_pairs(ds, t):
    """Enumerate every pair with exact rational Jaccard >= t."""
    out = set()
    for i, j in itertools.combinations(range(ds.n), 2):
        inter, union = jaccard_counts(ds[i], ds[j])
        if Fraction(inter, union) >= Fraction(t).limit_denominator(1000):
            out.add((i, j))
    return out


@pytest.mark.parametrize("t", [0.0, 0.2, 0.25, 0.5, 0.6, 0.75, 1.0])
def test_allpairs_matches_brute_force(t):
    got = allpairs_above(ExactScorer(HAND), HAND.n, t)
    assert set(got.members) == brute_pairs(HAND, t)
    plain = allpairs_above(exact_pair_scorer(HAND), HAND.n, t)
    assert plain == got


@pytest.mark.parametrize("t", [0.0, 0.2, 0.5, 0.75, 1.0])
def test_query_matches_brute_force(t):
    q = HAND[3]
    got = query_above(ExactScorer(HAND), q, HAND.n, t)
    expected = set()
    for j in range(HAND.n):
        inter, union = jaccard_counts(q, HAND[j])
        if Fraction(inter, union) >= Fraction(t).limit_denominator(1000):
            expected.add(j)
    assert set(got.members) == expected


def test_threshold_zero_and_above_max():
    ds = SparseDataset.from_sets(5, [[1, 2], [1, 3], [1, 4]])
    assert len(allpairs_above(ExactScorer(ds), 3, 0.0)) == 3
    assert len(allpairs_above(ExactScorer(ds), 3, 0.34)) == 0
    assert query_above(ExactScorer(ds), ds[0], 3, 0.0).members == {0, 1, 2}


def test_disjoint_query_returns_nothing():
    q = SparseDataset.from_sets(8, [[8]])[0]
    assert len(query_above(ExactScorer(HAND.subset([0, 1, 3])), q, 3, 0.1)) == 0


def test_bad_threshold():
    with pytest.raises(ValueError):
        allpairs_above(ExactScorer(HAND), HAND.n, 1.5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.integers(1, 12), min_size=1), min_size=2, max_size=8),
       st.floats(0, 1), st.floats(0, 1))
def test_threshold_monotone(sets, t1, t2):
    lo, hi = sorted((t1, t2))
    ds = SparseDataset.from_sets(12, sets)
    scorer = ExactScorer(ds)
    assert allpairs_above(scorer, ds.n, hi).members <= allpairs_above(scorer, ds.n, lo).members
    assert allpairs_above(scorer, ds.n, lo) == allpairs_above(scorer, ds.n, lo)


def test_result_accuracy():
    a = ResultSet(SearchMode.QUERY, frozenset(range(10)))
    assert result_accuracy(a, a) == 1.0
    assert result_accuracy(a, ResultSet(SearchMode.QUERY, frozenset({20}))) == 0.0
    half = ResultSet(SearchMode.QUERY, frozenset(range(5)))
    assert result_accuracy(a, half) == 0.5
    empty = ResultSet(SearchMode.QUERY)
    assert result_accuracy(empty, empty) == 1.0
    with pytest.raises(ValueError):
        result_accuracy(a, ResultSet(SearchMode.ALL_PAIRS))


def test_sketch_scorer_accepts_raw_rows():
    est = BcsSketcher(n_components=64, random_state=0).fit(HAND)
    packed = est.transform_packed(HAND)
    scorer = SketchScorer(packed, est.similarity)
    assert scorer(0, 0) == 1.0
    assert query_above(scorer, packed[2], HAND.n, 1.0).members >= {2}


def test_benchmark_row_layout():
    ds = gen_allpairs_dataset(30, 500, 10, 8, seed=1)
    rep = run_benchmark(ds, ["bcs", "minhash"], [50, 5000], [0.5], repeats=2, seed=3)
    assert len(rep.rows) == 4
    assert {(r.method, r.N) for r in rep.rows} == {("bcs", 50), ("bcs", 5000), ("minhash", 50), ("minhash", 5000)}
    assert all(r.repeats == 2 and 0 <= r.accuracy <= 1 for r in rep.rows)
    assert all(r.compress_time_s >= 0 and r.search_time_s >= 0 for r in rep.rows)


def test_benchmark_accuracy_reproducible():
    ds = gen_allpairs_dataset(40, 2000, 20, 10, seed=2)
    a = run_benchmark(ds, ["bcs", "minhash"], [64], [0.3, 0.6], repeats=2, seed=9)
    b = run_benchmark(ds, ["bcs", "minhash"], [64], [0.3, 0.6], repeats=2, seed=9)
    assert [r.accuracy for r in a.rows] == [r.accuracy for r in b.rows]


def test_benchmark_injective_map_lossless():
    ds = gen_allpairs_dataset(40, 300, 15, 10, seed=4)
    methods = {"bcs-injective": BcsSketcher(assignment=np.arange(1, 301))}
    rep = run_benchmark(ds, methods, [300], repeats=2, seed=0)
    assert [r.accuracy for r in rep.rows] == [1.0] * 9


def test_benchmark_query_mode_split_and_explicit():
    ds = gen_allpairs_dataset(60, 1000, 15, 20, seed=6)
    rep = run_benchmark(ds, ["bcs"], [256], [0.2, 0.5], repeats=1, seed=1, mode="query", query_fraction=0.1)
    assert len(rep.rows) == 2 and rep.mode is SearchMode.QUERY
    q, items = gen_knn_dataset(80, 5000, 20, 30, seed=7)
    rep = run_benchmark(items, ["minhash"], [400], [0.1], repeats=1, seed=1, mode="query",
                        queries=SparseDataset(5000, (q,)))
    assert rep.rows[0].accuracy > 0.5


def test_benchmark_validation():
    ds = gen_allpairs_dataset(10, 100, 5, 2, seed=0)
    with pytest.raises(ValueError):
        run_benchmark(ds, ["bcs"], [], [0.5])
    with pytest.raises(ValueError):
        run_benchmark(ds, ["bcs"], [10], [])
    with pytest.raises(ValueError):
        run_benchmark(ds, ["bcs"], [0], [0.5])
    with pytest.raises(ValueError):
        run_benchmark(ds, ["bcs"], [10], [0.5], repeats=0)
    with pytest.raises(ValueError):
        run_benchmark(ds, ["sha1"], [10], [0.5])
    with pytest.raises(ValueError):
        run_benchmark(SparseDataset(5, ()), ["bcs"], [10], [0.5])


def test_csv_roundtrip_and_header():
    ds = gen_allpairs_dataset(20, 300, 10, 5, seed=0)
    rep = run_benchmark(ds, ["bcs"], [32, 64], [0.1, 0.9], repeats=1, seed=0)
    text = rep.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    back = BenchReport.from_csv(io.StringIO(text))
    assert [r.as_tuple() for r in back.rows] == [r.as_tuple() for r in rep.rows]
    assert "mean_acc" in rep.format_summary()
    assert rep.mean_accuracy("bcs", 32) == pytest.approx(np.mean([r.accuracy for r in rep.select("bcs", 32)]))
