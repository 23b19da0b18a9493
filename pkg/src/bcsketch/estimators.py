"""scikit-learn transformers wrapping the BCS and MinHash compressors.

Both follow the usual contract: hyper-parameters in ``__init__``, fitted
state in trailing-underscore attributes, ``get_params``/``set_params`` and
``clone`` from :class:`~sklearn.base.BaseEstimator`.

>>> import numpy as np
>>> X = np.array([[1, 1, 0, 0, 0], [1, 0, 0, 0, 1]])
>>> BcsSketcher(n_components=8, random_state=0).fit_transform(X).shape
(2, 8)
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from bcsketch.similarity import bcs_jaccard_many, minhash_jaccard_many
from bcsketch.sketch import (
    BucketMap,
    PermutationFamily,
    bcs_compress_csr,
    unpack_bits,
)
from bcsketch.sketch import minhash_compress_csr
from bcsketch.validation import check_binary_matrix, check_positive_int, check_seed


class BcsSketcher(TransformerMixin, BaseEstimator):
    """Parity-bucket compression of binary data to ``n_components`` bits.

    Parameters
    ----------
    n_components : int
        Number of buckets ``N``.
    random_state : int, RandomState or None
        Integer seeds are used verbatim as the bucket-map key, so
        ``random_state=s`` reproduces ``make_bucket_map(d, N, s)``.
    assignment : array-like of int, optional
        Explicit 1-based bucket of every position; overrides the keyed map.

    Attributes
    ----------
    bucket_map_ : BucketMap
    n_features_in_ : int
    """

    def __init__(self, n_components=1000, random_state=None, assignment=None):
        self.n_components = n_components
        self.random_state = random_state
        self.assignment = assignment

    def fit(self, X, y=None):
        N = check_positive_int("n_components", self.n_components)
        m = check_binary_matrix(X)
        d = m.shape[1]
        if self.assignment is not None:
            self.bucket_map_ = BucketMap(d, N, 0, np.asarray(self.assignment))
        else:
            self.bucket_map_ = BucketMap(d, N, check_seed(self.random_state))
        self.n_features_in_ = d
        return self

    def transform_packed(self, X) -> np.ndarray:
        """``(n, ceil(N/64))`` uint64 words; the layout the search kernels use."""
        check_is_fitted(self, "bucket_map_")
        return bcs_compress_csr(check_binary_matrix(X, self.n_features_in_), self.bucket_map_)

    def transform(self, X) -> np.ndarray:
        """``(n, N)`` uint8 array of sketch bits."""
        return unpack_bits(self.transform_packed(X), self.bucket_map_.num_buckets)

    @staticmethod
    def similarity(row, sketches) -> np.ndarray:
        return bcs_jaccard_many(row, sketches)


class MinHashSketcher(TransformerMixin, BaseEstimator):
    """Permutation MinHash with ``n_components`` permutations.

    ``transform`` returns the arg-min position (1-based) per permutation, or
    0 for an empty row.
    """

    def __init__(self, n_components=100, random_state=None):
        self.n_components = n_components
        self.random_state = random_state

    def fit(self, X, y=None):
        N = check_positive_int("n_components", self.n_components)
        m = check_binary_matrix(X)
        self.permutations_ = PermutationFamily(m.shape[1], N, check_seed(self.random_state))
        self.n_features_in_ = m.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "permutations_")
        return minhash_compress_csr(check_binary_matrix(X, self.n_features_in_), self.permutations_)

    # MinHash sketches are searched as-is
    transform_packed = transform

    @staticmethod
    def similarity(row, sketches) -> np.ndarray:
        return minhash_jaccard_many(row, sketches)


SKETCHERS = {"bcs": BcsSketcher, "minhash": MinHashSketcher}


def make_sketcher(method: str, **params):
    try:
        cls = SKETCHERS[method.lower()]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(SKETCHERS)}") from None
    return cls(**params)
