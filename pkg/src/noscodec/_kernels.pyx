# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: beam extension/pruning and CRC bit loops.

Mirrors _kernels_py one-to-one; both backends produce bit-identical output
(scores come from the same sequence of IEEE additions and candidates are
ranked under the same total order, so ties resolve identically).
"""

import numpy as np

from libc.stdlib cimport free, malloc, qsort


ctypedef struct Cand:
    double score
    long long idx


cdef int _cmp_rank(const void* pa, const void* pb) noexcept nogil:
    # descending score, ascending flat index (= lexicographic tie rule)
    cdef double sa = (<const Cand*> pa).score
    cdef double sb = (<const Cand*> pb).score
    if sa > sb:
        return -1
    if sa < sb:
        return 1
    if (<const Cand*> pa).idx < (<const Cand*> pb).idx:
        return -1
    return 1


cdef int _cmp_idx(const void* pa, const void* pb) noexcept nogil:
    if (<const Cand*> pa).idx < (<const Cand*> pb).idx:
        return -1
    return 1


def kbest_core(logprobs, k):
    """Exact top-k index tuples by summed per-layer log probability.

    Returns (indices, scores) sorted by descending score; ties resolve to
    the lexicographically smaller tuple.
    """
    cdef double[:, ::1] l = np.ascontiguousarray(logprobs, dtype=np.float64)
    cdef Py_ssize_t n_layers = l.shape[0]
    cdef Py_ssize_t m_size = l.shape[1]
    cdef Py_ssize_t kk = int(k)
    if kk < 1:
        raise ValueError("k must be >= 1")

    cdef Py_ssize_t cap = kk * m_size
    cdef Cand* cand = <Cand*> malloc(cap * sizeof(Cand))
    cdef double* scores = <double*> malloc(kk * sizeof(double))
    cdef double* scores_next = <double*> malloc(kk * sizeof(double))
    cdef long long* paths = <long long*> malloc(kk * n_layers * sizeof(long long))
    cdef long long* paths_next = <long long*> malloc(kk * n_layers * sizeof(long long))
    if cand == NULL or scores == NULL or scores_next == NULL \
            or paths == NULL or paths_next == NULL:
        free(cand); free(scores); free(scores_next); free(paths); free(paths_next)
        raise MemoryError()

    cdef Py_ssize_t n_surv = 1
    cdef Py_ssize_t v, p, m, i, c, n_cand, n_keep
    cdef double base
    cdef long long flat
    cdef double* tmp_s
    cdef long long* tmp_p
    cdef long long[:, ::1] oi
    cdef double[::1] os
    scores[0] = 0.0

    try:
        for v in range(n_layers):
            n_cand = n_surv * m_size
            for p in range(n_surv):
                base = scores[p]
                for m in range(m_size):
                    cand[p * m_size + m].score = base + l[v, m]
                    cand[p * m_size + m].idx = p * m_size + m
            qsort(cand, n_cand, sizeof(Cand), _cmp_rank)
            n_keep = kk if kk < n_cand else n_cand
            # survivors go back to lexicographic order for the next layer
            qsort(cand, n_keep, sizeof(Cand), _cmp_idx)
            for i in range(n_keep):
                flat = cand[i].idx
                p = <Py_ssize_t> (flat // m_size)
                for c in range(v):
                    paths_next[i * n_layers + c] = paths[p * n_layers + c]
                paths_next[i * n_layers + v] = flat % m_size
                scores_next[i] = cand[i].score
            tmp_p = paths; paths = paths_next; paths_next = tmp_p
            tmp_s = scores; scores = scores_next; scores_next = tmp_s
            n_surv = n_keep

        # final ordering: descending score, lexicographic tie rule
        for i in range(n_surv):
            cand[i].score = scores[i]
            cand[i].idx = i
        qsort(cand, n_surv, sizeof(Cand), _cmp_rank)

        out_idx = np.empty((n_surv, n_layers), dtype=np.int64)
        out_scores = np.empty(n_surv, dtype=np.float64)
        oi = out_idx
        os = out_scores
        for i in range(n_surv):
            p = <Py_ssize_t> cand[i].idx
            for c in range(n_layers):
                oi[i, c] = paths[p * n_layers + c]
            os[i] = cand[i].score
        return out_idx, out_scores
    finally:
        free(cand)
        free(scores)
        free(scores_next)
        free(paths)
        free(paths_next)


def crc_remainder(const unsigned char[::1] bits, unsigned long long poly, int crc_len):
    """Bitwise remainder of the MSB-first bit word modulo the generator."""
    cdef unsigned long long top = (<unsigned long long> 1) << crc_len
    cdef unsigned long long r = 0
    cdef Py_ssize_t i
    for i in range(bits.shape[0]):
        r = (r << 1) | bits[i]
        if r & top:
            r ^= poly
    return r


def crc_scan(const long long[:, ::1] indices, int m_bits, int crc_len,
             unsigned long long poly):
    """Rank (0-based) of the first CRC-valid candidate tuple, or -1."""
    cdef unsigned long long top = (<unsigned long long> 1) << crc_len
    cdef unsigned long long r
    cdef long long word
    cdef Py_ssize_t rank, v
    cdef int j
    for rank in range(indices.shape[0]):
        r = 0
        for v in range(indices.shape[1]):
            word = indices[rank, v]
            for j in range(m_bits - 1, -1, -1):
                r = (r << 1) | ((word >> j) & 1)
                if r & top:
                    r ^= poly
        if r == 0:
            return rank
    return -1
