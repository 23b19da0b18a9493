import numpy as np
import pytest

from bcsketch import gen_allpairs_dataset, gen_knn_dataset, gen_similar_pair, jaccard_exact
from bcsketch.ingest import dumps_dataset
from bcsketch.similarity import jaccard_counts


def test_psi_one_gives_identical_singletons():
    for seed in range(20):
        u, v = gen_similar_pair(50, 1, seed)
        assert u == v and u.weight == 1
        assert jaccard_exact(u, v) == 1.0


def test_planted_pair_floor_and_sparsity():
    psi = 30
    for seed in range(10**4):
        u, v, (s, e1, e2) = gen_similar_pair(1000, psi, seed, with_counts=True)
        assert u.weight <= psi and v.weight <= psi
        assert 1 <= s <= psi
        if s < psi:
            assert 1 <= e1 <= psi - s and 1 <= e2 <= psi - s
        else:
            assert e1 == e2 == 0
        inter, union = jaccard_counts(u, v)
        # JS >= s / (s + s'_u + s'_v) >= s / (s + 2 max s'), compared as integers
        assert inter * (s + e1 + e2) >= s * union
        assert inter * (s + 2 * max(e1, e2)) >= s * union


def test_similar_pair_rejects_psi_above_dim():
    with pytest.raises(ValueError):
        gen_similar_pair(5, 6, 0)


def test_allpairs_paper_shape():
    ds = gen_allpairs_dataset(1000, 100000, 200, 200, seed=3)
    assert ds.n == 1000 and ds.dim == 100000
    assert ds.sparsity <= 200
    planted = [jaccard_exact(ds[2 * k], ds[2 * k + 1]) for k in range(200)]
    assert min(planted) > 0


def test_allpairs_single_pair():
    ds = gen_allpairs_dataset(2, 100, 10, 1, seed=0)
    assert ds.n == 2
    assert jaccard_exact(ds[0], ds[1]) > 0


def test_allpairs_random_pairs_nearly_disjoint():
    ds = gen_allpairs_dataset(300, 100000, 200, 0, seed=5)
    m = ds.csr
    inter = (m @ m.T).toarray()
    w = ds.weights
    union = w[:, None] + w[None, :] - inter
    iu = np.triu_indices(ds.n, 1)
    assert float(np.mean(inter[iu] / union[iu])) < 0.01


def test_allpairs_count_validation():
    with pytest.raises(ValueError):
        gen_allpairs_dataset(3, 100, 5, 2, 0)


def test_generators_reproducible():
    a = gen_allpairs_dataset(50, 2000, 20, 10, seed=11)
    b = gen_allpairs_dataset(50, 2000, 20, 10, seed=11)
    assert dumps_dataset(a) == dumps_dataset(b)
    assert dumps_dataset(a) != dumps_dataset(gen_allpairs_dataset(50, 2000, 20, 10, seed=12))
    q1, d1 = gen_knn_dataset(40, 2000, 20, 9, seed=1)
    q2, d2 = gen_knn_dataset(40, 2000, 20, 9, seed=1)
    assert q1 == q2 and dumps_dataset(d1) == dumps_dataset(d2)


def test_knn_paper_counts():
    q, ds = gen_knn_dataset(1000, 100000, 200, 249, seed=2)
    assert ds.n == 999
    assert q.weight <= 200 and ds.sparsity <= 200
    sims = np.array([jaccard_exact(q, v) for v in ds])
    assert np.all(sims[:249] > 0)
    assert sims[:249].mean() >= sims[249:].mean()


def test_knn_without_neighbors():
    q, ds = gen_knn_dataset(20, 5000, 10, 0, seed=4)
    assert ds.n == 19


def test_knn_small_dim_edge():
    q, ds = gen_knn_dataset(30, 10, 10, 20, seed=8)
    assert ds.sparsity <= 10


def test_knn_count_validation():
    with pytest.raises(ValueError):
        gen_knn_dataset(5, 100, 5, 5, 0)
