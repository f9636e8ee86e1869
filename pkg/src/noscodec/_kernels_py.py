"""Pure-numpy reference implementations of the hot kernels.

The compiled extension in _kernels.pyx mirrors these functions one-to-one;
outputs are bit-identical between the two backends (scores are built from
the same sequence of IEEE additions and the same total order is used for
ranking, so even ties resolve identically).
"""

from __future__ import annotations

import numpy as np


def kbest_core(logprobs: np.ndarray, k: int):
    """Exact top-k index tuples by summed per-layer log probability.

    Survivors are kept in lexicographic tuple order between layers; pruning
    keeps the k best by score with ties resolved toward the lexicographically
    smaller tuple.  Returns (indices, scores) sorted by descending score.
    """
    l = np.ascontiguousarray(logprobs, dtype=np.float64)
    if l.ndim != 2:
        raise ValueError("logprobs must be a 2-d array")
    if k < 1:
        raise ValueError("k must be >= 1")
    n_layers, M = l.shape
    paths = np.zeros((1, 0), dtype=np.int64)
    scores = np.zeros(1, dtype=np.float64)
    for v in range(n_layers):
        flat = (scores[:, None] + l[v][None, :]).ravel()
        keep = min(k, flat.size)
        # stable sort on -score keeps flattened (= lexicographic) order on ties
        best = np.argsort(-flat, kind="stable")[:keep]
        best.sort()
        paths = np.concatenate([paths[best // M], (best % M)[:, None]], axis=1)
        scores = flat[best]
    order = np.argsort(-scores, kind="stable")
    return paths[order], scores[order]


def crc_remainder(bits: np.ndarray, poly: int, crc_len: int) -> int:
    """Bitwise remainder of the MSB-first bit word modulo the generator.

    poly carries the degree-crc_len coefficient explicitly; the shift
    register starts at zero.
    """
    top = 1 << crc_len
    r = 0
    for b in bits:
        r = (r << 1) | int(b)
        if r & top:
            r ^= poly
    return r


def crc_scan(indices: np.ndarray, m_bits: int, crc_len: int, poly: int) -> int:
    """Rank (0-based) of the first candidate tuple whose expanded bit word
    has a zero CRC remainder, or -1 when none passes."""
    idx = np.asarray(indices, dtype=np.int64)
    top = 1 << crc_len
    for rank in range(idx.shape[0]):
        r = 0
        for v in range(idx.shape[1]):
            word = int(idx[rank, v])
            for j in range(m_bits - 1, -1, -1):
                r = (r << 1) | ((word >> j) & 1)
                if r & top:
                    r ^= poly
        if r == 0:
            return rank
    return -1
