"""Bucket maps, permutation families, and the two compressors.

BCS (binary compression scheme) sends each position ``i`` to a bucket
``b(i)`` in ``{1..N}`` and stores the parity of every bucket. MinHash keeps,
for each of ``N`` permutations, the set element with the smallest rank.
Sketch bits are packed little-endian into ``uint64`` words: bucket ``j`` lives
in word ``(j - 1) // 64`` at bit ``(j - 1) % 64``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from bcsketch._hashing import as_u64, keyed_hash
from bcsketch.vectors import SparseBinaryVector, SparseDataset

EMPTY = 0
"""MinHash value recorded for the empty set (positions start at 1)."""

WORD_BITS = 64


def n_words(num_buckets: int) -> int:
    return (num_buckets + WORD_BITS - 1) // WORD_BITS


def _check_positive(name, value):
    if int(value) < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")


# --------------------------------------------------------------------------
# Bucket maps
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BucketMap:
    """Assignment ``position -> bucket`` evaluated on demand.

    By default the bucket of a position is a keyed hash of ``(seed, position)``
    reduced mod ``num_buckets``, so the map needs O(1) memory and any single
    position can be looked up while streaming. ``table`` overrides this with an
    explicit assignment (used for fixtures such as injective maps).
    """

    dim: int
    num_buckets: int
    seed: int = 0
    table: Optional[np.ndarray] = None

    def __post_init__(self):
        _check_positive("dim", self.dim)
        _check_positive("num_buckets", self.num_buckets)
        if self.table is not None:
            table = np.array(self.table, dtype=np.int64).reshape(-1)
            if table.size != self.dim:
                raise ValueError(f"table has {table.size} entries, expected {self.dim}")
            if table.size and (table.min() < 1 or table.max() > self.num_buckets):
                raise ValueError(f"table entries must lie in [1, {self.num_buckets}]")
            table.setflags(write=False)
            object.__setattr__(self, "table", table)

    @classmethod
    def from_assignment(cls, assignment, num_buckets: int) -> "BucketMap":
        assignment = np.asarray(assignment, dtype=np.int64)
        return cls(int(assignment.size), int(num_buckets), 0, assignment)

    def buckets(self, positions) -> np.ndarray:
        """1-based buckets of the given 1-based positions (no range check)."""
        positions = np.asarray(positions, dtype=np.int64)
        if self.table is not None:
            return self.table[positions - 1]
        h = keyed_hash(self.seed, positions)
        return (h % np.uint64(self.num_buckets)).astype(np.int64) + 1

    def __call__(self, position: int) -> int:
        if not 1 <= position <= self.dim:
            raise IndexError(f"position {position} outside [1, {self.dim}]")
        return int(self.buckets(np.array([position]))[0])

    def assignment(self) -> np.ndarray:
        """Materialize the whole map; O(dim) memory."""
        return self.buckets(np.arange(1, self.dim + 1))

    def __eq__(self, other):
        if not isinstance(other, BucketMap):
            return NotImplemented
        if (self.dim, self.num_buckets) != (other.dim, other.num_buckets):
            return False
        if self.table is None and other.table is None:
            return as_u64(self.seed) == as_u64(other.seed)
        return np.array_equal(self.assignment(), other.assignment())

    __hash__ = None


def make_bucket_map(dim: int, num_buckets: int, seed: int) -> BucketMap:
    return BucketMap(dim, num_buckets, int(seed))


# --------------------------------------------------------------------------
# BCS sketches
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BcsSketch:
    num_buckets: int
    words: np.ndarray

    def __post_init__(self):
        _check_positive("num_buckets", self.num_buckets)
        words = np.array(self.words, dtype=np.uint64).reshape(-1)
        if words.size != n_words(self.num_buckets):
            raise ValueError(f"expected {n_words(self.num_buckets)} words, got {words.size}")
        tail = self.num_buckets % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise ValueError("bits set beyond num_buckets")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def zeros(cls, num_buckets: int) -> "BcsSketch":
        return cls(num_buckets, np.zeros(n_words(num_buckets), dtype=np.uint64))

    @classmethod
    def from_bits(cls, bits) -> "BcsSketch":
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        return cls(bits.size, pack_bits(bits[None, :])[0])

    @property
    def bits(self) -> np.ndarray:
        return unpack_bits(self.words[None, :], self.num_buckets)[0]

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def set_buckets(self) -> np.ndarray:
        """1-based buckets holding a 1."""
        return np.flatnonzero(self.bits) + 1

    def __xor__(self, other):
        if not isinstance(other, BcsSketch):
            return NotImplemented
        if other.num_buckets != self.num_buckets:
            raise ValueError("sketch lengths differ")
        return BcsSketch(self.num_buckets, self.words ^ other.words)

    def __eq__(self, other):
        if not isinstance(other, BcsSketch):
            return NotImplemented
        return self.num_buckets == other.num_buckets and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.num_buckets, self.words.tobytes()))

    def __repr__(self):
        return f"BcsSketch(num_buckets={self.num_buckets}, weight={self.weight})"


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """``(n, N)`` 0/1 array to ``(n, ceil(N/64))`` uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    n, N = bits.shape
    padded = np.zeros((n, n_words(N) * WORD_BITS), dtype=np.uint8)
    padded[:, :N] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64, copy=False)


def unpack_bits(words: np.ndarray, num_buckets: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :num_buckets]


def _check_dims(vec_dim, map_dim):
    if vec_dim != map_dim:
        raise ValueError(f"dimension mismatch: vector dim {vec_dim}, map dim {map_dim}")


def bcs_compress(v: SparseBinaryVector, bucket_map: BucketMap) -> BcsSketch:
    """Parity of each bucket; touches only the set positions of ``v``."""
    _check_dims(v.dim, bucket_map.dim)
    words = np.zeros(n_words(bucket_map.num_buckets), dtype=np.uint64)
    if v.weight:
        b = bucket_map.buckets(v.indices) - 1
        np.bitwise_xor.at(words, b >> 6, np.left_shift(np.uint64(1), (b & 63).astype(np.uint64)))
    return BcsSketch(bucket_map.num_buckets, words)


def bcs_update(sketch: BcsSketch, position: int, bucket_map: BucketMap) -> BcsSketch:
    """Toggle ``position`` in the underlying set; returns a new sketch."""
    if sketch.num_buckets != bucket_map.num_buckets:
        raise ValueError("sketch and map disagree on num_buckets")
    if not 1 <= int(position) <= bucket_map.dim:
        raise IndexError(f"position {position} outside [1, {bucket_map.dim}]")
    b = bucket_map(int(position)) - 1
    words = sketch.words.copy()
    words[b >> 6] ^= np.uint64(1) << np.uint64(b & 63)
    return BcsSketch(sketch.num_buckets, words)


def bcs_compress_csr(matrix, bucket_map: BucketMap) -> np.ndarray:
    """Compress every row of a 0/1 CSR matrix (0-based columns) at once.

    Returns the ``(n, ceil(N/64))`` packed word matrix.
    """
    _check_dims(matrix.shape[1], bucket_map.dim)
    n = matrix.shape[0]
    nw = n_words(bucket_map.num_buckets)
    words = np.zeros(n * nw, dtype=np.uint64)
    cols = np.asarray(matrix.indices, dtype=np.int64)
    if cols.size:
        rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(matrix.indptr))
        b = bucket_map.buckets(cols + 1) - 1
        flat = rows * nw + (b >> 6)
        np.bitwise_xor.at(words, flat, np.left_shift(np.uint64(1), (b & 63).astype(np.uint64)))
    return words.reshape(n, nw)


def bcs_compress_dataset(ds: SparseDataset, bucket_map: BucketMap) -> list[BcsSketch]:
    words = bcs_compress_csr(ds.csr, bucket_map)
    return [BcsSketch(bucket_map.num_buckets, w) for w in words]


# --------------------------------------------------------------------------
# Permutation families and MinHash
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PermutationFamily:
    """``num_perms`` permutations of ``{1..dim}``, built one at a time.

    ``perm(k)`` returns the rank array ``r`` with ``r[i - 1] = pi_k(i)``. Each
    permutation is an unbiased shuffle driven by its own generator seeded
    with ``(seed, k)``, so any single one can be rebuilt without the others.
    ``explicit`` pins the permutations instead (used for exhaustive tests).
    """

    dim: int
    num_perms: int
    seed: int = 0
    explicit: Optional[np.ndarray] = None

    def __post_init__(self):
        _check_positive("dim", self.dim)
        _check_positive("num_perms", self.num_perms)
        if self.explicit is not None:
            perms = np.array(self.explicit, dtype=np.int64)
            if perms.shape != (self.num_perms, self.dim):
                raise ValueError(f"explicit perms must have shape {(self.num_perms, self.dim)}")
            ref = np.arange(1, self.dim + 1)
            if not all(np.array_equal(np.sort(p), ref) for p in perms):
                raise ValueError("explicit rows must be permutations of 1..dim")
            perms.setflags(write=False)
            object.__setattr__(self, "explicit", perms)

    @classmethod
    def from_permutations(cls, perms) -> "PermutationFamily":
        perms = np.asarray(perms, dtype=np.int64)
        return cls(perms.shape[1], perms.shape[0], 0, perms)

    def perm(self, k: int) -> np.ndarray:
        if not 0 <= k < self.num_perms:
            raise IndexError(f"permutation index {k} outside [0, {self.num_perms})")
        if self.explicit is not None:
            return self.explicit[k]
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([as_u64(self.seed), k])))
        return rng.permutation(self.dim) + 1

    def __iter__(self) -> Iterator[np.ndarray]:
        for k in range(self.num_perms):
            yield self.perm(k)

    def __len__(self):
        return self.num_perms

    def __eq__(self, other):
        if not isinstance(other, PermutationFamily):
            return NotImplemented
        if (self.dim, self.num_perms) != (other.dim, other.num_perms):
            return False
        if self.explicit is None and other.explicit is None:
            return as_u64(self.seed) == as_u64(other.seed)
        return all(np.array_equal(a, b) for a, b in zip(self, other))

    __hash__ = None


def make_permutation_family(dim: int, num_perms: int, seed: int) -> PermutationFamily:
    return PermutationFamily(dim, num_perms, int(seed))


@dataclass(frozen=True, eq=False)
class MinHashSketch:
    num_perms: int
    values: np.ndarray

    def __post_init__(self):
        _check_positive("num_perms", self.num_perms)
        values = np.array(self.values, dtype=np.int64).reshape(-1)
        if values.size != self.num_perms:
            raise ValueError(f"expected {self.num_perms} values, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def is_empty(self) -> bool:
        return bool(np.all(self.values == EMPTY))

    def __eq__(self, other):
        if not isinstance(other, MinHashSketch):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())


def minhash_compress(v: SparseBinaryVector, family: PermutationFamily) -> MinHashSketch:
    _check_dims(v.dim, family.dim)
    values = np.full(family.num_perms, EMPTY, dtype=np.int64)
    if v.weight:
        for k, ranks in enumerate(family):
            values[k] = v.indices[np.argmin(ranks[v.indices - 1])]
    return MinHashSketch(family.num_perms, values)


def minhash_compress_csr(matrix, family: PermutationFamily) -> np.ndarray:
    """MinHash of every row of a 0/1 CSR matrix; returns ``(n, N)`` int64.

    Each permutation is materialized once and applied to all rows, so memory
    stays O(dim + nnz).
    """
    _check_dims(matrix.shape[1], family.dim)
    n = matrix.shape[0]
    out = np.full((n, family.num_perms), EMPTY, dtype=np.int64)
    cols = np.asarray(matrix.indices, dtype=np.int64)
    lengths = np.diff(matrix.indptr)
    nonempty = np.flatnonzero(lengths)
    if nonempty.size == 0:
        return out
    starts = np.asarray(matrix.indptr[:-1], dtype=np.int64)[nonempty]
    inverse = np.empty(family.dim, dtype=np.int64)
    positions = np.arange(1, family.dim + 1, dtype=np.int64)
    for k, ranks in enumerate(family):
        inverse[ranks - 1] = positions
        min_rank = np.minimum.reduceat(ranks[cols], starts)
        out[nonempty, k] = inverse[min_rank - 1]
    return out


def minhash_compress_dataset(ds: SparseDataset, family: PermutationFamily) -> list[MinHashSketch]:
    values = minhash_compress_csr(ds.csr, family)
    return [MinHashSketch(family.num_perms, row) for row in values]
