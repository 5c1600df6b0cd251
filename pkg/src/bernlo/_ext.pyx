# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for subset-sum enumeration.

Gray-code walk over all 2^n subsets of a coefficient vector: each step
flips one element in/out of the running sum, so the full enumeration is
O(2^n) adds instead of O(n 2^n).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def subset_sums(cnp.float64_t[::1] coeffs, double p):
    """Return (sums, weights) over all 2^n subsets of `coeffs`.

    weights[i] = p^|S_i| * (1-p)^(n-|S_i|) for the subset visited at
    Gray-code step i.  Subset weights are looked up from a precomputed
    power table indexed by popcount, so no multiplicative drift
    accumulates along the walk.
    """
    cdef Py_ssize_t n = coeffs.shape[0]
    if n > 30:
        raise ValueError("enumeration limited to n <= 30")
    cdef unsigned long long total = 1ULL << n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.empty(total, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] weights = np.empty(total, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pw_arr = np.empty(n + 1, dtype=np.float64)
    cdef cnp.float64_t[::1] pw = pw_arr
    cdef Py_ssize_t k
    for k in range(n + 1):
        pw[k] = p ** k * (1.0 - p) ** (n - k)

    cdef double running = 0.0
    cdef int pop = 0
    cdef unsigned long long i, gray, prev_gray, changed
    cdef int bit
    sums[0] = 0.0
    weights[0] = pw[0]
    prev_gray = 0
    for i in range(1, total):
        gray = i ^ (i >> 1)
        changed = gray ^ prev_gray
        bit = 0
        while not (changed & 1ULL):
            changed >>= 1
            bit += 1
        if gray & (1ULL << bit):
            running += coeffs[bit]
            pop += 1
        else:
            running -= coeffs[bit]
            pop -= 1
        sums[i] = running
        weights[i] = pw[pop]
        prev_gray = gray
    return sums, weights
