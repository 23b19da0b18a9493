"""Keyed 64-bit mixing used for bucket assignment and seed derivation."""
import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def as_u64(seed):
    """Reduce any Python int (negative allowed) to an unsigned 64-bit value."""
    return int(seed) & _MASK64


def keyed_hash(seed, values):
    """SplitMix64 output for stream ``seed`` at counters ``values``.

    Distinct counters under one key give distinct outputs (the finalizer is a
    bijection), and nearby seeds are decorrelated by mixing the key first.
    """
    values = np.asarray(values, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _mix(np.array([as_u64(seed)], dtype=np.uint64) + _GAMMA)[0]
        return _mix(key + values * _GAMMA)


def derive_seed(master_seed, index):
    """Child seed for ``index`` under ``master_seed``; stable across platforms."""
    return int(keyed_hash(master_seed, np.array([index], dtype=np.uint64))[0])
