"""Deterministic 64-bit hashing used for subsampling and reservoir priorities.

The scalar and vectorized versions agree bit for bit, so a class receives the
same priority whichever enumeration path produced it.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & MASK
    x = ((x ^ (x >> 30)) * _M1) & MASK
    x = ((x ^ (x >> 27)) * _M2) & MASK
    return x ^ (x >> 31)


def priority(values, seed: int) -> int:
    """Hash of an integer tuple; values may be negative."""
    h = splitmix64(seed & MASK)
    for v in values:
        h = splitmix64(h ^ (int(v) & MASK))
    return h


def priority_array(columns, seed: int) -> np.ndarray:
    """Vectorized :func:`priority` over equal-length integer columns."""
    with np.errstate(over="ignore"):
        n = len(columns[0])
        h = np.full(n, splitmix64(seed & MASK), dtype=np.uint64)
        for col in columns:
            h = _splitmix_array(h ^ np.asarray(col).astype(np.int64).view(np.uint64))
    return h


def _splitmix_array(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def keep_threshold(p: float) -> int:
    """Priorities strictly below this value are kept with probability ``p``."""
    if p >= 1.0:
        return 1 << 64
    return int(p * (1 << 64))
