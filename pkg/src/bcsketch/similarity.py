"""Exact set similarities and the estimators evaluated on sketches.

The empty-versus-empty case is defined as Jaccard 1 for the exact oracle and
for both estimators, so the three always agree on it.
"""
from __future__ import annotations

import numpy as np

from bcsketch.sketch import BcsSketch, MinHashSketch
from bcsketch.vectors import SparseBinaryVector


def _check_same_dim(u, v):
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")


def inner_exact(u: SparseBinaryVector, v: SparseBinaryVector) -> int:
    """``|u & v|``."""
    _check_same_dim(u, v)
    return int(np.intersect1d(u.indices, v.indices, assume_unique=True).size)


def hamming_exact(u: SparseBinaryVector, v: SparseBinaryVector) -> int:
    """``|u ^ v|``."""
    return u.weight + v.weight - 2 * inner_exact(u, v)


def jaccard_counts(u: SparseBinaryVector, v: SparseBinaryVector) -> tuple[int, int]:
    """``(|u & v|, |u | v|)`` as integers, for exact comparisons."""
    inter = inner_exact(u, v)
    return inter, u.weight + v.weight - inter


def jaccard_exact(u: SparseBinaryVector, v: SparseBinaryVector) -> float:
    inter, union = jaccard_counts(u, v)
    return 1.0 if union == 0 else inter / union


def jaccard_from_counts(inter, union):
    """Elementwise ``inter / union`` with 0/0 read as 1."""
    inter = np.asarray(inter, dtype=np.float64)
    union = np.asarray(union, dtype=np.float64)
    out = np.ones(np.broadcast(inter, union).shape, dtype=np.float64)
    np.divide(inter, union, out=out, where=union > 0)
    return out


def jaccard_bcs(a: BcsSketch, b: BcsSketch) -> float:
    """``popcount(a & b) / popcount(a | b)`` on the packed words."""
    if a.num_buckets != b.num_buckets:
        raise ValueError(f"sketch length mismatch: {a.num_buckets} vs {b.num_buckets}")
    inter = int(np.bitwise_count(a.words & b.words).sum())
    union = int(np.bitwise_count(a.words | b.words).sum())
    return 1.0 if union == 0 else inter / union


def jaccard_minhash(a: MinHashSketch, b: MinHashSketch) -> float:
    """Fraction of coordinates that agree; two EMPTY entries agree."""
    if a.num_perms != b.num_perms:
        raise ValueError(f"sketch length mismatch: {a.num_perms} vs {b.num_perms}")
    return int(np.count_nonzero(a.values == b.values)) / a.num_perms


# --------------------------------------------------------------------------
# One-to-many kernels used by the search scans
# --------------------------------------------------------------------------


def bcs_jaccard_many(row: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Estimated Jaccard between one packed sketch and each row of ``words``."""
    inter = np.bitwise_count(words & row).sum(axis=1, dtype=np.int64)
    union = np.bitwise_count(words | row).sum(axis=1, dtype=np.int64)
    return jaccard_from_counts(inter, union)


def minhash_jaccard_many(row: np.ndarray, values: np.ndarray) -> np.ndarray:
    return np.count_nonzero(values == row, axis=1) / values.shape[1]


def exact_jaccard_many(row_csr, weight: int, matrix, weights: np.ndarray) -> np.ndarray:
    """Exact Jaccard between one CSR row and every row of ``matrix``."""
    inter = np.asarray((matrix @ row_csr.T).todense(), dtype=np.int64).reshape(-1)
    return jaccard_from_counts(inter, weights + weight - inter)
