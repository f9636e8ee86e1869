"""Bit packing, superposition encoding, and log-domain marginal decoding."""

from __future__ import annotations

import numpy as np

from .codebook import Codebook, CodeParams


def bits_to_indices(bits, params: CodeParams) -> np.ndarray:
    """Split a V*m bit word into V layer indices (contiguous MSB-first chunks)."""
    b = np.asarray(bits, dtype=np.int64).ravel()
    if b.size != params.total_bits:
        raise ValueError(f"expected {params.total_bits} bits, got {b.size}")
    if np.any((b != 0) & (b != 1)):
        raise ValueError("bits must be 0 or 1")
    weights = np.left_shift(1, np.arange(params.m - 1, -1, -1, dtype=np.int64))
    return b.reshape(params.V, params.m) @ weights


def indices_to_bits(indices, params: CodeParams) -> np.ndarray:
    """Inverse of bits_to_indices: V layer indices back to the V*m bit word."""
    idx = np.asarray(indices, dtype=np.int64).ravel()
    if idx.size != params.V:
        raise ValueError(f"expected {params.V} indices, got {idx.size}")
    if np.any((idx < 0) | (idx >= params.M)):
        raise ValueError(f"index out of range [0, {params.M})")
    shifts = np.arange(params.m - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()


def encode(indices, codebook: Codebook) -> np.ndarray:
    """Superimpose the selected codeword of every layer into one length-D vector."""
    p = codebook.params
    idx = np.asarray(indices, dtype=np.int64).ravel()
    if idx.size != p.V:
        raise ValueError(f"expected {p.V} indices, got {idx.size}")
    if np.any((idx < 0) | (idx >= p.M)):
        raise ValueError(f"index out of range [0, {p.M})")
    return codebook.entries[np.arange(p.V), idx].sum(axis=0)


def to_complex(real) -> np.ndarray:
    """Map a length-D real vector to D/2 complex symbols.

    The first D/2 entries become real parts and the last D/2 imaginary parts.
    """
    x = np.asarray(real, dtype=np.float64).ravel()
    if x.size % 2 != 0:
        raise ValueError("real signal length must be even")
    h = x.size // 2
    return x[:h] + 1j * x[h:]


def to_real(cplx) -> np.ndarray:
    """Exact inverse of to_complex."""
    z = np.asarray(cplx, dtype=np.complex128).ravel()
    return np.concatenate([z.real, z.imag])


def map_marginals(y, codebook: Codebook, n0: float) -> np.ndarray:
    """Per-layer posterior log-marginals from scaled correlations.

    Row v is the log-softmax over m of 2*(y . entries[v, m])/n0, computed in
    the log domain throughout so large correlations cannot overflow.  Rows
    are exact posterior marginals when codewords of different layers are
    orthogonal.
    """
    if n0 <= 0:
        raise ValueError("n0 must be positive")
    e = codebook.entries
    V, M, D = e.shape
    yv = np.asarray(y, dtype=np.float64).ravel()
    if yv.size != D:
        raise ValueError(f"received vector length {yv.size}, expected {D}")
    scores = (2.0 / n0) * (e.reshape(V * M, D) @ yv).reshape(V, M)
    mx = scores.max(axis=1)
    lse = mx + np.log(np.exp(scores - mx[:, None]).sum(axis=1))
    return scores - lse[:, None]


def hard_decision(logprobs) -> np.ndarray:
    """Per-layer argmax; ties break toward the smaller index."""
    l = np.asarray(logprobs)
    if l.ndim != 2:
        raise ValueError("logprobs must be a 2-d array")
    return np.argmax(l, axis=1).astype(np.int64)
