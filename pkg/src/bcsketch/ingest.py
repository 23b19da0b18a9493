"""UCI bag-of-words loading, sampling/splitting, and the native text formats.

Native dataset format (UTF-8, LF)::

    n d
    <ascending 1-based positions of vector 0, space separated>
    ...

An empty line is an empty vector. Sketch files share the layout with header
``n N method seed``; BCS rows list the 1-based set buckets, MinHash rows list
the ``N`` arg-min positions (0 for the empty set).
"""
from __future__ import annotations

import gzip
import io
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from bcsketch._hashing import as_u64
from bcsketch.vectors import SparseBinaryVector, SparseDataset


class FormatError(ValueError):
    """Malformed input file; ``lineno`` is 1-based when known."""

    def __init__(self, message, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}:"
            if lineno is not None:
                where += f"{lineno}:"
            where += " "
        super().__init__(where + message)


@dataclass(frozen=True)
class BowHeader:
    num_docs: int
    vocab_size: int
    nnz: int

    def __post_init__(self):
        if min(self.num_docs, self.vocab_size, self.nnz) < 1:
            raise ValueError("docword header values must be positive")
        if self.nnz > self.num_docs * self.vocab_size:
            raise ValueError("NNZ exceeds num_docs * vocab_size")


def _open_text(path):
    path = Path(path)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def _parse_int(token, path, lineno, what):
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"{what}: expected an integer, got {token!r}", path, lineno) from None


def read_docword_header(path) -> BowHeader:
    with _open_text(path) as fh:
        return _read_header(fh, path)


def _read_header(fh, path):
    values = []
    for lineno, name in enumerate(("D", "W", "NNZ"), start=1):
        line = fh.readline()
        if not line:
            raise FormatError(f"missing header line {name}", path, lineno)
        tokens = line.split()
        if len(tokens) != 1:
            raise FormatError(f"header line {name} must hold one integer", path, lineno)
        values.append(_parse_int(tokens[0], path, lineno, name))
    try:
        return BowHeader(*values)
    except ValueError as exc:
        raise FormatError(str(exc), path, 3) from None


def _parse_body_slow(lines, path, header):
    """Line-by-line parse used only to produce a precise diagnostic."""
    for offset, line in enumerate(lines):
        lineno = offset + 4
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) != 3:
            raise FormatError(f"expected 'docID wordID count', got {line.strip()!r}", path, lineno)
        doc, word, count = (_parse_int(t, path, lineno, n) for t, n in zip(tokens, ("docID", "wordID", "count")))
        _check_triplet(doc, word, count, header, path, lineno)
    raise FormatError("unparseable body", path)


def _check_triplet(doc, word, count, header, path, lineno):
    if not 1 <= doc <= header.num_docs:
        raise FormatError(f"docID {doc} outside [1, {header.num_docs}]", path, lineno)
    if not 1 <= word <= header.vocab_size:
        raise FormatError(f"wordID {word} outside [1, {header.vocab_size}]", path, lineno)
    if count < 0:
        raise FormatError(f"negative count {count}", path, lineno)


def load_docword(path) -> SparseDataset:
    """Binarized UCI ``docword`` corpus: one vector per document, ``dim = W``.

    Any positive count sets the word; repeated (doc, word) lines collapse.
    Reads ``.gz`` files transparently.
    """
    with _open_text(path) as fh:
        header = _read_header(fh, path)
        body = fh.read()
    lines = body.splitlines()
    # blank trailing lines are tolerated
    while lines and not lines[-1].strip():
        lines.pop()
    try:
        triples = np.loadtxt(lines, dtype=np.int64, ndmin=2) if lines else np.zeros((0, 3), np.int64)
    except ValueError:
        _parse_body_slow(lines, path, header)
    if triples.size and triples.shape[1] != 3:
        _parse_body_slow(lines, path, header)
    docs, words, counts = triples.T if triples.size else (np.zeros(0, np.int64),) * 3
    bad = (docs < 1) | (docs > header.num_docs) | (words < 1) | (words > header.vocab_size) | (counts < 0)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        _check_triplet(int(docs[k]), int(words[k]), int(counts[k]), header, path, k + 4)
    if triples.shape[0] != header.nnz:
        raise FormatError(f"header announces {header.nnz} entries, body has {triples.shape[0]}", path)
    keep = counts > 0
    m = sp.csr_matrix(
        (np.ones(int(keep.sum()), dtype=np.int32), (docs[keep] - 1, words[keep] - 1)),
        shape=(header.num_docs, header.vocab_size),
    )
    return SparseDataset.from_csr(m)


def sample_dataset(ds: SparseDataset, m: int, seed: int) -> SparseDataset:
    """``m`` vectors uniformly without replacement, in sampled order."""
    if not 1 <= m <= ds.n:
        raise ValueError(f"sample size must lie in [1, {ds.n}], got {m}")
    rng = np.random.default_rng(as_u64(seed))
    return ds.subset(rng.permutation(ds.n)[:m])


def split_train_query(ds: SparseDataset, query_fraction: float, seed: int):
    """Seeded disjoint split; ``|query| = round(query_fraction * n)`` (halves up)."""
    if not 0 < query_fraction < 1:
        raise ValueError(f"query_fraction must lie in (0, 1), got {query_fraction}")
    n_query = int(math.floor(query_fraction * ds.n + 0.5))
    if n_query == 0 or n_query == ds.n:
        raise ValueError(f"split of {ds.n} vectors at {query_fraction} leaves an empty partition")
    order = np.random.default_rng(as_u64(seed)).permutation(ds.n)
    return ds.subset(np.sort(order[n_query:])), ds.subset(np.sort(order[:n_query]))


# --------------------------------------------------------------------------
# Native formats
# --------------------------------------------------------------------------


def _row_text(values) -> str:
    return " ".join(map(str, values))


def dumps_dataset(ds: SparseDataset) -> str:
    lines = [f"{ds.n} {ds.dim}"]
    lines += [_row_text(v.indices.tolist()) for v in ds.vectors]
    return "\n".join(lines) + "\n"


def write_dataset(ds: SparseDataset, path) -> None:
    Path(path).write_text(dumps_dataset(ds), encoding="utf-8", newline="\n")


def read_dataset(path) -> SparseDataset:
    with _open_text(path) as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", path, 1)
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("header must be 'n d'", path, 1)
    n, d = (_parse_int(t, path, 1, name) for t, name in zip(head, ("n", "d")))
    if n < 0 or d < 1:
        raise FormatError(f"invalid header n={n} d={d}", path, 1)
    if len(lines) - 1 != n:
        raise FormatError(f"header announces {n} vectors, found {len(lines) - 1}", path)
    vectors = []
    for k, line in enumerate(lines[1:], start=2):
        idx = [_parse_int(t, path, k, "position") for t in line.split()]
        try:
            vectors.append(SparseBinaryVector(d, np.array(idx, dtype=np.int64)))
        except ValueError as exc:
            raise FormatError(str(exc), path, k) from None
    return SparseDataset(d, tuple(vectors))


def write_sketches(path, method: str, num_components: int, seed: int, rows) -> None:
    """``rows`` are per-vector integer sequences (see module docstring)."""
    rows = list(rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(rows)} {num_components} {method} {seed}\n")
        for row in rows:
            fh.write(_row_text(np.asarray(row).tolist()) + "\n")


def read_sketches(path):
    """Returns ``(method, N, seed, rows)`` with rows as int64 arrays."""
    with _open_text(path) as fh:
        head = fh.readline().split()
        if len(head) != 4:
            raise FormatError("header must be 'n N method seed'", path, 1)
        n = _parse_int(head[0], path, 1, "n")
        N = _parse_int(head[1], path, 1, "N")
        seed = _parse_int(head[3], path, 1, "seed")
        rows = [np.array(line.split(), dtype=np.int64) for line in fh.read().split("\n")[:n]]
    if len(rows) != n:
        raise FormatError(f"header announces {n} rows, found {len(rows)}", path)
    return head[2], N, seed, rows


def ensure_parent(path) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
