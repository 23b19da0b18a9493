"""Synthetic sparse datasets with planted similar pairs or query neighbours."""
from __future__ import annotations

import numpy as np

from bcsketch._hashing import as_u64
from bcsketch.vectors import SparseBinaryVector, SparseDataset


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(as_u64(seed))


def _check(dim, psi):
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if psi < 1:
        raise ValueError(f"psi must be >= 1, got {psi}")
    if psi > dim:
        raise ValueError(f"psi ({psi}) cannot exceed dim ({dim})")


def _sample_outside(rng, dim, k, exclude):
    """``k`` distinct 0-based positions from ``range(dim)`` avoiding ``exclude``."""
    k = min(k, dim - exclude.size)
    if k <= 0:
        return np.zeros(0, dtype=np.int64)
    # a draw of k + |exclude| distinct positions always keeps k outside exclude
    if exclude.size * 2 < dim:
        draw = rng.choice(dim, size=k + exclude.size, replace=False)
        return draw[~np.isin(draw, exclude)][:k]
    pool = np.setdiff1d(np.arange(dim), exclude, assume_unique=True)
    return rng.choice(pool, size=k, replace=False)


def _extra_count(rng, psi, s):
    return int(rng.integers(1, psi - s, endpoint=True)) if s < psi else 0


def _random_vector(rng, dim, psi):
    w = int(rng.integers(1, psi, endpoint=True))
    return SparseBinaryVector(dim, np.sort(rng.choice(dim, size=w, replace=False)) + 1)


def _planted_from(rng, dim, psi, base):
    """Vector sharing a uniform-size subset of ``base`` plus fresh extras.

    ``base`` holds 0-based positions. Returns the vector and ``(s, s')``.
    """
    s = int(rng.integers(1, base.size, endpoint=True))
    shared = rng.choice(base, size=s, replace=False)
    extra = _sample_outside(rng, dim, _extra_count(rng, psi, s), base)
    return SparseBinaryVector(dim, np.sort(np.concatenate([shared, extra])) + 1), s, extra.size


def _planted_pair(rng, dim, psi):
    s = int(rng.integers(1, psi, endpoint=True))
    shared = rng.choice(dim, size=s, replace=False)
    e1 = _sample_outside(rng, dim, _extra_count(rng, psi, s), shared)
    e2 = _sample_outside(rng, dim, _extra_count(rng, psi, s), shared)
    u = SparseBinaryVector(dim, np.sort(np.concatenate([shared, e1])) + 1)
    v = SparseBinaryVector(dim, np.sort(np.concatenate([shared, e2])) + 1)
    return u, v, (s, e1.size, e2.size)


def gen_similar_pair(dim: int, psi: int, seed: int, with_counts: bool = False):
    """Two vectors sharing ``s ~ U[1, psi]`` positions.

    Each vector then gets its own ``s' ~ U[1, psi - s]`` extra positions
    (none when ``s == psi``) drawn outside the shared block, so the pair has
    Jaccard at least ``s / (s + s'_u + s'_v)``. With ``with_counts`` the
    triple ``(s, s'_u, s'_v)`` is returned as a third element.
    """
    _check(dim, psi)
    u, v, counts = _planted_pair(_rng(seed), dim, psi)
    return (u, v, counts) if with_counts else (u, v)


def gen_allpairs_dataset(n: int, dim: int, psi: int, num_similar_pairs: int, seed: int) -> SparseDataset:
    """Planted pairs first (rows ``2k`` and ``2k + 1``), random vectors after."""
    _check(dim, psi)
    if n < 1 or num_similar_pairs < 0 or 2 * num_similar_pairs > n:
        raise ValueError(f"need 0 <= 2 * num_similar_pairs <= n, got n={n}, pairs={num_similar_pairs}")
    rng = _rng(seed)
    vectors = []
    for _ in range(num_similar_pairs):
        u, v, _counts = _planted_pair(rng, dim, psi)
        vectors += [u, v]
    vectors += [_random_vector(rng, dim, psi) for _ in range(n - 2 * num_similar_pairs)]
    return SparseDataset(dim, tuple(vectors))


def gen_knn_dataset(n: int, dim: int, psi: int, num_neighbors: int, seed: int):
    """A query plus ``n - 1`` items: ``num_neighbors`` planted neighbours first.

    ``n`` counts the query, so ``n=1000, num_neighbors=249`` gives a query,
    249 neighbours and 750 background vectors. Neighbours reuse a uniform
    number of the query's positions and add extras outside the query.
    """
    _check(dim, psi)
    if n < 2 or not 0 <= num_neighbors < n:
        raise ValueError(f"need 0 <= num_neighbors < n and n >= 2, got n={n}, neighbors={num_neighbors}")
    rng = _rng(seed)
    query = _random_vector(rng, dim, psi)
    base = query.indices - 1
    vectors = [_planted_from(rng, dim, psi, base)[0] for _ in range(num_neighbors)]
    vectors += [_random_vector(rng, dim, psi) for _ in range(n - 1 - num_neighbors)]
    return query, SparseDataset(dim, tuple(vectors))
