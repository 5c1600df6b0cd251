"""Pure-Python/numpy fallback for the compiled enumeration kernel.

Chunked bit-matrix expansion: memory stays bounded at chunk_size * n
doubles regardless of n.
"""

import numpy as np

_CHUNK = 1 << 16


def subset_sums(coeffs, p):
    """Return (sums, weights) over all 2^n subsets of `coeffs`.

    Same contract as the compiled kernel: weights[i] is
    p^|S_i| (1-p)^(n-|S_i|) with subsets indexed by Gray code, so the
    two implementations produce identical orderings.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    n = coeffs.shape[0]
    if n > 30:
        raise ValueError("enumeration limited to n <= 30")
    total = 1 << n
    pw = np.array([p**k * (1.0 - p) ** (n - k) for k in range(n + 1)])
    sums = np.empty(total)
    weights = np.empty(total)
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        gray = idx ^ (idx >> np.uint64(1))
        bits = ((gray[:, None] >> shifts) & np.uint64(1)).astype(np.float64)
        sums[start : start + len(idx)] = bits @ coeffs
        weights[start : start + len(idx)] = pw[bits.sum(axis=1).astype(np.intp)]
    return sums, weights
