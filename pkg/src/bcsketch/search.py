"""Brute-force threshold search, the result-overlap accuracy, and benchmarks.

Search is a plain scan on both raw data and sketches: quadratic for all
pairs, linear per query. Items match when their similarity is ``>=`` the
threshold.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from sklearn.base import clone

from bcsketch._hashing import derive_seed
from bcsketch.estimators import make_sketcher
from bcsketch.ingest import split_train_query
from bcsketch.similarity import exact_jaccard_many, jaccard_exact
from bcsketch.validation import check_binary_matrix
from bcsketch.vectors import SparseDataset

log = logging.getLogger(__name__)

CSV_FIELDS = ("method", "N", "threshold", "accuracy", "compress_time_s", "search_time_s", "repeats")
PAPER_THRESHOLDS = tuple(round(0.1 * k, 1) for k in range(1, 10))


class SearchMode(str, enum.Enum):
    ALL_PAIRS = "allpairs"
    QUERY = "query"


@dataclass(frozen=True)
class SearchConfig:
    threshold: float
    mode: SearchMode = SearchMode.ALL_PAIRS

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
        object.__setattr__(self, "mode", SearchMode(self.mode))


@dataclass(frozen=True)
class ResultSet:
    """Pairs ``(i, j)`` with ``i < j`` (all-pairs) or item indices (query)."""

    mode: SearchMode
    members: frozenset = frozenset()

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return item in self.members

    def __iter__(self):
        return iter(sorted(self.members))


# --------------------------------------------------------------------------
# Scorers: similarity over a fixed collection of items
# --------------------------------------------------------------------------


class ExactScorer:
    """Exact Jaccard over raw vectors; queries are ``SparseBinaryVector``s."""

    def __init__(self, items):
        self.matrix = check_binary_matrix(items)
        self.weights = np.diff(self.matrix.indptr).astype(np.int64)

    def _as_row(self, a):
        if isinstance(a, (int, np.integer)):
            return self.matrix[int(a)], int(self.weights[int(a)])
        row = check_binary_matrix(a, self.matrix.shape[1])
        return row, int(row.nnz)

    def many(self, a, js: np.ndarray) -> np.ndarray:
        row, w = self._as_row(a)
        return exact_jaccard_many(row, w, self.matrix[js], self.weights[js])

    def __call__(self, a, j: int) -> float:
        return float(self.many(a, np.array([j]))[0])


class SketchScorer:
    """Estimated Jaccard over a matrix of sketches (one row per item).

    ``kernel(row, rows)`` scores one sketch against many; queries are sketch
    rows of the same layout.
    """

    def __init__(self, sketches: np.ndarray, kernel: Callable):
        self.sketches = sketches
        self.kernel = kernel

    def many(self, a, js: np.ndarray) -> np.ndarray:
        row = self.sketches[int(a)] if isinstance(a, (int, np.integer)) else np.asarray(a)
        return self.kernel(row, self.sketches[js])

    def __call__(self, a, j: int) -> float:
        return float(self.many(a, np.array([j]))[0])


def allpairs_above(similarity_fn, item_count: int, threshold: float) -> ResultSet:
    """All ``(i, j)``, ``i < j``, with ``similarity_fn(i, j) >= threshold``.

    Scorers exposing ``many(i, js)`` are scanned one row at a time; plain
    callables are evaluated pair by pair.
    """
    SearchConfig(threshold)
    found = []
    many = getattr(similarity_fn, "many", None)
    for i in range(item_count - 1):
        if many is not None:
            js = np.arange(i + 1, item_count)
            hits = js[many(i, js) >= threshold]
            found.extend((i, int(j)) for j in hits)
        else:
            found.extend((i, j) for j in range(i + 1, item_count) if similarity_fn(i, j) >= threshold)
    return ResultSet(SearchMode.ALL_PAIRS, frozenset(found))


def query_above(similarity_fn, query, item_count: int, threshold: float) -> ResultSet:
    """Items ``j`` with ``similarity_fn(query, j) >= threshold``."""
    SearchConfig(threshold, SearchMode.QUERY)
    many = getattr(similarity_fn, "many", None)
    if many is not None:
        js = np.arange(item_count)
        hits = js[many(query, js) >= threshold] if item_count else js
        return ResultSet(SearchMode.QUERY, frozenset(int(j) for j in hits))
    return ResultSet(
        SearchMode.QUERY,
        frozenset(j for j in range(item_count) if similarity_fn(query, j) >= threshold),
    )


def exact_pair_scorer(ds: SparseDataset) -> Callable[[int, int], float]:
    """Pairwise exact Jaccard as a plain callable (no vectorization)."""
    return lambda i, j: jaccard_exact(ds[i], ds[j])


def result_accuracy(ground: ResultSet, got: ResultSet) -> float:
    """Jaccard ratio of the two result sets; 1 when both are empty."""
    if ground.mode != got.mode:
        raise ValueError(f"mode mismatch: {ground.mode.value} vs {got.mode.value}")
    union = len(ground.members | got.members)
    if union == 0:
        return 1.0
    return len(ground.members & got.members) / union


# --------------------------------------------------------------------------
# Benchmark
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    method: str
    N: int
    threshold: float
    accuracy: float
    compress_time_s: float
    search_time_s: float
    repeats: int

    def as_tuple(self):
        return (self.method, self.N, self.threshold, self.accuracy, self.compress_time_s,
                self.search_time_s, self.repeats)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    mode: SearchMode = SearchMode.ALL_PAIRS

    def to_csv(self, fh=None) -> Optional[str]:
        """Write to an open file, or return the CSV text when ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in self.rows:
            writer.writerow([r.method, r.N, repr(float(r.threshold)), repr(r.accuracy),
                             repr(r.compress_time_s), repr(r.search_time_s), r.repeats])
        return out.getvalue() if fh is None else None

    @classmethod
    def from_csv(cls, fh) -> "BenchReport":
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = [
            BenchRow(d["method"], int(d["N"]), float(d["threshold"]), float(d["accuracy"]),
                     float(d["compress_time_s"]), float(d["search_time_s"]), int(d["repeats"]))
            for d in reader
        ]
        return cls(rows)

    def select(self, method=None, N=None, threshold=None) -> list:
        return [r for r in self.rows
                if (method is None or r.method == method)
                and (N is None or r.N == N)
                and (threshold is None or r.threshold == threshold)]

    def mean_accuracy(self, method: str, N: int) -> float:
        """Accuracy averaged over the thresholds of one ``(method, N)`` cell."""
        rows = self.select(method, N)
        if not rows:
            raise KeyError((method, N))
        return float(np.mean([r.accuracy for r in rows]))

    def summary(self) -> list:
        """``(method, N, mean accuracy, compress time, mean search time)`` per cell."""
        out = []
        for method, N in dict.fromkeys((r.method, r.N) for r in self.rows):
            rows = self.select(method, N)
            out.append((method, N, self.mean_accuracy(method, N), rows[0].compress_time_s,
                        float(np.mean([r.search_time_s for r in rows]))))
        return out

    def format_summary(self) -> str:
        lines = [f"{'method':<10} {'N':>7} {'mean_acc':>9} {'compress_s':>11} {'search_s':>11}"]
        for method, N, acc, ct, st in self.summary():
            lines.append(f"{method:<10} {N:>7d} {acc:>9.4f} {ct:>11.5f} {st:>11.6f}")
        return "\n".join(lines)


def _as_templates(methods) -> dict:
    if isinstance(methods, Mapping):
        return dict(methods)
    return {m: make_sketcher(m) for m in methods}


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def run_benchmark(
    dataset: SparseDataset,
    methods: Union[Iterable[str], Mapping[str, object]],
    lengths: Sequence[int],
    thresholds: Sequence[float] = PAPER_THRESHOLDS,
    repeats: int = 10,
    seed: int = 0,
    mode: Union[str, SearchMode] = SearchMode.ALL_PAIRS,
    queries: Optional[SparseDataset] = None,
    query_fraction: float = 0.1,
) -> BenchReport:
    """Accuracy and timings of sketch search against exact search.

    ``methods`` is a list of names (``"bcs"``, ``"minhash"``) or a mapping
    from a label to an unfitted sketcher; each cell clones the template with
    ``n_components=N`` and a per-repeat seed ``derive_seed(seed, repeat)``.

    In query mode the items are ``dataset`` and the queries are ``queries``;
    when ``queries`` is None the dataset is split with ``query_fraction``.
    Accuracy is averaged over queries, and ``search_time_s`` is the mean time
    of one query scan. In all-pairs mode ``search_time_s`` is the time of the
    whole quadratic scan. ``compress_time_s`` covers fitting the sketcher and
    compressing every item and query. Ground truth is computed once and is
    excluded from all timings.
    """
    mode = SearchMode(mode)
    lengths = [int(N) for N in lengths]
    thresholds = [float(t) for t in thresholds]
    if not lengths or not thresholds:
        raise ValueError("lengths and thresholds must be nonempty")
    if any(N < 1 for N in lengths):
        raise ValueError("compression lengths must be positive")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for t in thresholds:
        SearchConfig(t, mode)
    if dataset.n == 0:
        raise ValueError("empty dataset")
    templates = _as_templates(methods)

    if mode is SearchMode.QUERY:
        if queries is None:
            dataset, queries = split_train_query(dataset, query_fraction, derive_seed(seed, 2**32))
        if queries.n == 0:
            raise ValueError("no query vectors")
        if queries.dim != dataset.dim:
            raise ValueError("queries and items differ in dimension")
        exact = ExactScorer(dataset)
        truth = {t: [query_above(exact, q, dataset.n, t) for q in queries] for t in thresholds}
        fit_data = SparseDataset(dataset.dim, dataset.vectors + queries.vectors)
    else:
        exact = ExactScorer(dataset)
        truth = {t: allpairs_above(exact, dataset.n, t) for t in thresholds}
        fit_data = dataset

    report = BenchReport(mode=mode)
    for label, template in templates.items():
        for N in lengths:
            acc = np.zeros(len(thresholds))
            search_s = np.zeros(len(thresholds))
            compress_s = 0.0
            for rep in range(repeats):
                est = clone(template).set_params(n_components=N, random_state=derive_seed(seed, rep))
                sketches, dt = _timed(lambda: est.fit(fit_data).transform_packed(fit_data))
                compress_s += dt
                scorer = SketchScorer(sketches[: dataset.n], est.similarity)
                for k, t in enumerate(thresholds):
                    if mode is SearchMode.QUERY:
                        q_sketches = sketches[dataset.n:]
                        per_query = []
                        for qi, row in enumerate(q_sketches):
                            got, dt = _timed(query_above, scorer, row, dataset.n, t)
                            search_s[k] += dt / len(q_sketches)
                            per_query.append(result_accuracy(truth[t][qi], got))
                        acc[k] += np.mean(per_query)
                    else:
                        got, dt = _timed(allpairs_above, scorer, dataset.n, t)
                        search_s[k] += dt
                        acc[k] += result_accuracy(truth[t], got)
            for k, t in enumerate(thresholds):
                report.rows.append(BenchRow(label, N, t, float(acc[k] / repeats), compress_s / repeats,
                                            float(search_s[k] / repeats), repeats))
            log.info("%s N=%d mean accuracy %.4f", label, N, report.mean_accuracy(label, N))
    return report
