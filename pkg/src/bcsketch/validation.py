"""Input coercion for the estimators and the benchmark."""
from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp
from sklearn.utils import check_random_state

from bcsketch.vectors import SparseBinaryVector, SparseDataset, to_csr


def check_binary_matrix(X, dim=None) -> sp.csr_matrix:
    """Coerce ``X`` to a canonical 0/1 CSR matrix with 0-based columns.

    Accepts a :class:`SparseDataset`, a sequence of
    :class:`SparseBinaryVector`, a scipy sparse matrix, or a dense array.
    Positive entries become 1; negative entries are rejected so that count
    matrices binarize cleanly while signed data fails loudly.
    """
    if isinstance(X, SparseDataset):
        m = X.csr
    elif isinstance(X, SparseBinaryVector):
        m = to_csr([X], X.dim)
    elif isinstance(X, (list, tuple)) and X and all(isinstance(v, SparseBinaryVector) for v in X):
        dims = {v.dim for v in X}
        if len(dims) != 1:
            raise ValueError(f"vectors have differing dims {sorted(dims)}")
        m = to_csr(X, dims.pop())
    else:
        if sp.issparse(X):
            m = sp.csr_matrix(X)
        else:
            arr = np.asarray(X)
            if arr.ndim != 2:
                raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
            m = sp.csr_matrix(arr)
        if m.shape[1] < 1:
            raise ValueError("X has no columns")
        if m.nnz and m.data.min() < 0:
            raise ValueError("X must be nonnegative (binary or counts)")
        m = m.copy()
        m.sum_duplicates()
        m.eliminate_zeros()
        m.sort_indices()
        m.data = np.ones(m.nnz, dtype=np.int32)
    if dim is not None and m.shape[1] != dim:
        raise ValueError(f"X has {m.shape[1]} features, expected {dim}")
    return m


def check_seed(random_state) -> int:
    """Integer seeds pass through; anything else draws one via sklearn."""
    if isinstance(random_state, numbers.Integral):
        return int(random_state)
    rs = check_random_state(random_state)
    return int(rs.randint(0, np.iinfo(np.int64).max, dtype=np.int64))


def check_positive_int(name, value) -> int:
    if not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
