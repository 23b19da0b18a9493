"""Compression-length calculator and corruption bounds for BCS.

All logarithms are base 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from bcsketch.sketch import BucketMap
from bcsketch.vectors import SparseBinaryVector

SHORT_BRANCH = "eps*r > 3 log n"
LONG_BRANCH = "eps*r <= 3 log n"


@dataclass(frozen=True)
class CompressionParams:
    """Inputs of the length calculator.

    ``epsilon_tilde`` is the tolerance of the Jaccard guarantee; it defaults to
    the smallest admissible value ``max(eps, 2 eps / (1 - eps))``.
    """

    psi: int
    n: int
    epsilon: float
    r: int
    epsilon_tilde: Optional[float] = None

    def __post_init__(self):
        if self.psi < 1:
            raise ValueError(f"psi must be >= 1, got {self.psi}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        floor = min_epsilon_tilde(self.epsilon)
        if self.epsilon_tilde is None:
            object.__setattr__(self, "epsilon_tilde", floor)
        elif self.epsilon_tilde < floor:
            raise ValueError(f"epsilon_tilde must be >= {floor:.6g}, got {self.epsilon_tilde}")

    @property
    def branch(self) -> str:
        return SHORT_BRANCH if self.epsilon * self.r > 3 * math.log2(self.n) else LONG_BRANCH


def min_epsilon_tilde(epsilon: float) -> float:
    return max(epsilon, 2 * epsilon / (1 - epsilon))


def required_length(p: CompressionParams) -> int:
    """``16 psi^2`` when eps*r > 3 log n, otherwise ``ceil(144 psi^2 log^2 n)``."""
    if p.branch == SHORT_BRANCH:
        return 16 * p.psi**2
    return math.ceil(144 * p.psi**2 * math.log2(p.n) ** 2)


def corruption_bound(psi: int, N: int, epsilon: float, r: float) -> float:
    """Upper bound on Pr[two sketches share more than eps*r corrupted buckets]."""
    if N < 1 or psi < 1:
        raise ValueError("psi and N must be >= 1")
    base = 2 * psi / math.sqrt(N)
    if base >= 1:
        return 1.0
    return min(1.0, base ** (epsilon * r))


def bcs_random_bits(dim: int, N: int) -> int:
    """Random bits needed to draw every bucket explicitly: ``d * ceil(log N)``."""
    return dim * max(1, math.ceil(math.log2(N)))


def minhash_random_bits(dim: int, N: int) -> int:
    """Random bits for ``N`` explicit permutations: ``N * d * ceil(log d)``."""
    return N * dim * max(1, math.ceil(math.log2(dim)))


def corrupted_buckets(u: SparseBinaryVector, v: SparseBinaryVector, bucket_map: BucketMap) -> int:
    """Buckets receiving two or more active positions of the pair.

    A position is active when either vector holds a 1 there.
    """
    if u.dim != v.dim or u.dim != bucket_map.dim:
        raise ValueError("dimension mismatch")
    active = np.union1d(u.indices, v.indices)
    if active.size < 2:
        return 0
    counts = np.unique(bucket_map.buckets(active), return_counts=True)[1]
    return int(np.count_nonzero(counts >= 2))
