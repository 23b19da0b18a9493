import numpy as np
import pytest

from bcsketch import SparseBinaryVector, SparseDataset


def test_indices_must_be_strictly_increasing():
    with pytest.raises(ValueError):
        SparseBinaryVector(5, [2, 1])
    with pytest.raises(ValueError):
        SparseBinaryVector(5, [1, 1])


@pytest.mark.parametrize("bad", [[0], [6], [-1, 3]])
def test_indices_must_be_in_range(bad):
    with pytest.raises(ValueError):
        SparseBinaryVector(5, bad)


def test_zero_dim_rejected():
    with pytest.raises(ValueError):
        SparseBinaryVector(0, [])


def test_weight_and_dense_roundtrip():
    v = SparseBinaryVector.from_positions(6, [5, 1, 5, 2])
    assert v.indices.tolist() == [1, 2, 5]
    assert v.weight == 3
    assert v.to_dense().tolist() == [1, 1, 0, 0, 1, 0]
    assert SparseBinaryVector.from_dense(v.to_dense()) == v


def test_indices_are_immutable():
    v = SparseBinaryVector(4, [1, 3])
    with pytest.raises(ValueError):
        v.indices[0] = 2


def test_dataset_sparsity_is_recomputed():
    ds = SparseDataset.from_sets(10, [[1], [2, 3, 4], []])
    assert ds.sparsity == 3
    assert ds.n == 3
    assert ds.csr.shape == (3, 10)
    assert ds.csr[1].indices.tolist() == [1, 2, 3]


def test_dataset_rejects_dim_mismatch():
    with pytest.raises(ValueError):
        SparseDataset(5, (SparseBinaryVector(4, [1]),))


def test_from_csr_binarizes_counts():
    import scipy.sparse as sp

    m = sp.csr_matrix(np.array([[0, 3, 0], [1, 0, 2]]))
    ds = SparseDataset.from_csr(m)
    assert [v.to_set() for v in ds] == [{2}, {1, 3}]
