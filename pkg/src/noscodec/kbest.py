"""CRC-assisted K-best list search over the layered index tree.

The joint log probability of an index tuple is the sum of per-layer log
marginals, and the layer increment never depends on earlier layers, so a
breadth-first beam that keeps the K best partial sums per layer returns the
exact top-K of the joint score.  Candidates are then scanned in rank order
and the first CRC-valid one is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _backend
from .codebook import CodeParams
from .codec import indices_to_bits
from .crc import CRC11, CrcSpec


@dataclass(frozen=True)
class Candidate:
    indices: np.ndarray  # (V,) int64 layer indices
    score: float         # sum of per-layer log probabilities


@dataclass(frozen=True)
class CandidateList:
    """Candidates sorted by non-increasing score; index tuples are distinct."""

    indices: np.ndarray  # (n, V) int64
    scores: np.ndarray   # (n,) float64

    def __len__(self) -> int:
        return int(self.scores.shape[0])

    def __getitem__(self, k: int) -> Candidate:
        return Candidate(self.indices[k], float(self.scores[k]))

    def __iter__(self) -> Iterator[Candidate]:
        for k in range(len(self)):
            yield self[k]


@dataclass(frozen=True)
class DecodeResult:
    status: str                    # "success" or "crc_failure"
    bits: Optional[np.ndarray]     # total_bits word when status == "success"
    candidate_rank: Optional[int]  # 1-based rank of the accepted candidate


def kbest_search(logprobs, k: int) -> CandidateList:
    """Top-k index tuples by joint score.

    Equal scores resolve toward the lexicographically smaller tuple.  When
    the tree has fewer than k leaves, all of them are returned.
    """
    l = np.ascontiguousarray(logprobs, dtype=np.float64)
    if l.ndim != 2:
        raise ValueError("logprobs must be a 2-d array")
    if k < 1:
        raise ValueError("k must be >= 1")
    idx, scores = _backend.kbest_core(l, int(k))
    return CandidateList(indices=idx, scores=scores)


def select_first_valid(
    candidates: CandidateList, params: CodeParams, spec: CrcSpec = CRC11
) -> DecodeResult:
    """Scan candidates in rank order and accept the first CRC-valid one."""
    rank = int(_backend.crc_scan(candidates.indices, params.m, spec.length, spec.poly))
    if rank < 0:
        return DecodeResult(status="crc_failure", bits=None, candidate_rank=None)
    bits = indices_to_bits(candidates.indices[rank], params)
    return DecodeResult(status="success", bits=bits, candidate_rank=rank + 1)


def crc_assisted_decode(
    logprobs, k: int, params: CodeParams, spec: CrcSpec = CRC11
) -> DecodeResult:
    """K-best search followed by the sequential CRC scan."""
    l = np.asarray(logprobs)
    if l.shape != (params.V, params.M):
        raise ValueError(
            f"logprobs shape {l.shape} does not match params "
            f"{(params.V, params.M)}"
        )
    return select_first_valid(kbest_search(l, k), params, spec)
