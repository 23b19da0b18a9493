"""Similarity-preserving compression of sparse binary sets.

Parity-bucket sketches (BCS) and permutation MinHash, exact Jaccard oracles,
brute-force threshold search, and a benchmark harness comparing the two.
"""
from bcsketch.datagen import gen_allpairs_dataset, gen_knn_dataset, gen_similar_pair
from bcsketch.estimators import BcsSketcher, MinHashSketcher
from bcsketch.ingest import load_docword, read_dataset, sample_dataset, split_train_query, write_dataset
from bcsketch.params import CompressionParams, corruption_bound, required_length
from bcsketch.search import (
    BenchReport,
    ResultSet,
    allpairs_above,
    query_above,
    result_accuracy,
    run_benchmark,
)
from bcsketch.similarity import (
    hamming_exact,
    inner_exact,
    jaccard_bcs,
    jaccard_exact,
    jaccard_minhash,
)
from bcsketch.sketch import (
    EMPTY,
    BcsSketch,
    BucketMap,
    MinHashSketch,
    PermutationFamily,
    bcs_compress,
    bcs_update,
    make_bucket_map,
    make_permutation_family,
    minhash_compress,
)
from bcsketch.vectors import SparseBinaryVector, SparseDataset

__version__ = "0.1.0"

__all__ = [
    "EMPTY", "BcsSketch", "BcsSketcher", "BenchReport", "BucketMap", "CompressionParams",
    "MinHashSketch", "MinHashSketcher", "PermutationFamily", "ResultSet", "SparseBinaryVector",
    "SparseDataset", "allpairs_above", "bcs_compress", "bcs_update", "corruption_bound",
    "gen_allpairs_dataset", "gen_knn_dataset", "gen_similar_pair", "hamming_exact", "inner_exact",
    "jaccard_bcs", "jaccard_exact", "jaccard_minhash", "load_docword", "make_bucket_map",
    "make_permutation_family", "minhash_compress", "query_above", "read_dataset", "required_length",
    "result_accuracy", "run_benchmark", "sample_dataset", "split_train_query", "write_dataset",
]
