"""Sparse binary vectors (sets over ``{1..d}``) and datasets of them.

Positions are 1-based everywhere in the public API. The CSR views handed to
numerical code use 0-based columns, i.e. column ``i - 1`` holds position ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


def _readonly(arr):
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SparseBinaryVector:
    """A vector in ``{0,1}^dim`` stored as its strictly increasing 1-positions."""

    dim: int
    indices: np.ndarray

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        idx = _readonly(np.asarray(self.indices).reshape(-1))
        if idx.size:
            if idx[0] < 1 or idx[-1] > self.dim:
                raise ValueError(f"indices must lie in [1, {self.dim}]")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_positions(cls, dim: int, positions: Iterable[int]) -> "SparseBinaryVector":
        """Build from any iterable of positions; order and repeats are ignored."""
        arr = np.fromiter((int(p) for p in positions), dtype=np.int64)
        return cls(dim, np.unique(arr))

    @classmethod
    def from_dense(cls, bits) -> "SparseBinaryVector":
        bits = np.asarray(bits).reshape(-1)
        return cls(bits.size, np.flatnonzero(bits) + 1)

    @property
    def weight(self) -> int:
        return int(self.indices.size)

    def to_set(self) -> set[int]:
        return set(self.indices.tolist())

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.uint8)
        out[self.indices - 1] = 1
        return out

    def __len__(self):
        return self.weight

    def __iter__(self):
        return iter(self.indices.tolist())

    def __eq__(self, other):
        if not isinstance(other, SparseBinaryVector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.dim, self.indices.tobytes()))

    def __repr__(self):
        shown = self.indices[:8].tolist()
        tail = ", ..." if self.weight > 8 else ""
        return f"SparseBinaryVector(dim={self.dim}, indices={shown}{tail})"


@dataclass(frozen=True, eq=False)
class SparseDataset:
    """An ordered collection of vectors sharing one dimension.

    ``sparsity`` is always recomputed from the vectors.
    """

    dim: int
    vectors: tuple

    def __post_init__(self):
        vectors = tuple(self.vectors)
        for k, v in enumerate(vectors):
            if not isinstance(v, SparseBinaryVector):
                raise TypeError(f"vector {k} is {type(v).__name__}, not SparseBinaryVector")
            if v.dim != self.dim:
                raise ValueError(f"vector {k} has dim {v.dim}, dataset dim is {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_csr(cls, matrix) -> "SparseDataset":
        """Build from a sparse matrix; any stored nonzero counts as a 1."""
        m = sp.csr_matrix(matrix)
        m.eliminate_zeros()
        m.sum_duplicates()
        m.sort_indices()
        rows = np.split(m.indices.astype(np.int64) + 1, m.indptr[1:-1])
        return cls(m.shape[1], tuple(SparseBinaryVector(m.shape[1], r) for r in rows))

    @classmethod
    def from_sets(cls, dim: int, sets: Iterable[Iterable[int]]) -> "SparseDataset":
        return cls(dim, tuple(SparseBinaryVector.from_positions(dim, s) for s in sets))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def sparsity(self) -> int:
        return max((v.weight for v in self.vectors), default=0)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([v.weight for v in self.vectors], dtype=np.int64)

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """``(n, dim)`` 0/1 matrix with 0-based columns."""
        return to_csr(self.vectors, self.dim)

    def subset(self, rows: Sequence[int]) -> "SparseDataset":
        return SparseDataset(self.dim, tuple(self.vectors[int(r)] for r in rows))

    def __len__(self):
        return self.n

    def __getitem__(self, k):
        return self.vectors[k]

    def __iter__(self):
        return iter(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, SparseDataset):
            return NotImplemented
        return self.dim == other.dim and self.vectors == other.vectors

    def __repr__(self):
        return f"SparseDataset(n={self.n}, dim={self.dim}, sparsity={self.sparsity})"


def to_csr(vectors: Sequence[SparseBinaryVector], dim: int) -> sp.csr_matrix:
    lengths = np.fromiter((v.weight for v in vectors), dtype=np.int64, count=len(vectors))
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    if len(vectors):
        cols = np.concatenate([v.indices for v in vectors]) - 1
    else:
        cols = np.zeros(0, dtype=np.int64)
    data = np.ones(cols.size, dtype=np.int32)
    return sp.csr_matrix((data, cols, indptr), shape=(len(vectors), dim))
