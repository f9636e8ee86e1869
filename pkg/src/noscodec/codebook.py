"""Codebooks for superimposed transmission.

A codebook is a V x M x D table of real codewords: layer v maps one of M
indices to the row entries[v, k, :].  Rows carry equal energy D/V so each of
the V superimposed layers contributes the same transmit power.  This module
owns construction, normalization, structural analysis (cross-correlation and
pairwise transmit distances) and the binary file format.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import STREAM_ANALYSIS, STREAM_INIT, derive_rng

MAGIC = b"NOSC"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4s4I")  # magic, version, V, M, D
HEADER_BYTES = _HEADER.size

DEFAULT_CRC_LEN = 11
HIST_BINS = 100


class CodebookFormatError(ValueError):
    """Raised for malformed codebook files."""


@dataclass(frozen=True)
class CodeParams:
    """Code geometry: V superimposed layers, M indices per layer, D real dims."""

    V: int
    M: int
    D: int
    crc_len: int = DEFAULT_CRC_LEN

    def __post_init__(self):
        if self.V < 1:
            raise ValueError(f"V must be >= 1, got {self.V}")
        if self.M < 2 or (self.M & (self.M - 1)) != 0:
            raise ValueError(f"M must be a power of two >= 2, got {self.M}")
        if self.D < 2 or self.D % 2 != 0:
            raise ValueError(f"D must be an even integer >= 2, got {self.D}")
        if self.crc_len < 0:
            raise ValueError(f"crc_len must be >= 0, got {self.crc_len}")
        if self.total_bits <= self.crc_len:
            raise ValueError(
                f"V*log2(M) = {self.total_bits} must exceed crc_len = {self.crc_len}"
            )

    @property
    def m(self) -> int:
        """Bits carried by one layer index."""
        return self.M.bit_length() - 1

    @property
    def total_bits(self) -> int:
        """Transmitted bits per packet, CRC parity included."""
        return self.V * self.m

    @property
    def info_bits(self) -> int:
        return self.total_bits - self.crc_len

    @property
    def rate(self) -> float:
        """Transmitted bits per complex channel use, V*m / (D/2)."""
        return self.total_bits / (self.D / 2)

    @property
    def row_energy(self) -> float:
        return self.D / self.V


def new_params(V: int, M: int, D: int, crc_len: int = DEFAULT_CRC_LEN) -> CodeParams:
    """Validate and build a CodeParams."""
    return CodeParams(int(V), int(M), int(D), int(crc_len))


@dataclass(frozen=True)
class Codebook:
    """Immutable V x M x D float64 codeword table plus its parameters."""

    params: CodeParams
    entries: np.ndarray

    def __post_init__(self):
        e = np.ascontiguousarray(self.entries, dtype=np.float64)
        p = self.params
        if e.shape != (p.V, p.M, p.D):
            raise ValueError(
                f"entries shape {e.shape} does not match params {(p.V, p.M, p.D)}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def row_energies(self) -> np.ndarray:
        """(V, M) array of per-row energies."""
        return np.einsum("vmd,vmd->vm", self.entries, self.entries)


def normalize_rows(entries: np.ndarray) -> np.ndarray:
    """Scale every row of a (V, M, D) table to energy D/V, direction unchanged."""
    entries = np.asarray(entries, dtype=np.float64)
    V, _, D = entries.shape
    energy = np.einsum("vmd,vmd->vm", entries, entries)
    if np.any(energy == 0.0):
        raise ValueError("zero-energy codeword row cannot be normalized")
    return entries * np.sqrt((D / V) / energy)[:, :, None]


def normalize(codebook: Codebook) -> Codebook:
    """Rescale every codeword row to energy D/V."""
    return Codebook(codebook.params, normalize_rows(codebook.entries))


def random_codebook(params: CodeParams, seed: int) -> Codebook:
    """Normalized i.i.d. Gaussian codebook; deterministic for a given seed."""
    rng = derive_rng(seed, STREAM_INIT, 0)
    w = rng.standard_normal((params.V, params.M, params.D))
    return Codebook(params, normalize_rows(w))


def orthogonal_codebook(params: CodeParams, seed: int = 0) -> Codebook:
    """Codebook whose V*M rows are mutually orthogonal (requires V*M <= D).

    Built by QR-orthogonalizing Gaussian vectors; mainly useful as a test
    oracle, since the marginal decoder is exact under orthogonality.
    """
    p = params
    if p.V * p.M > p.D:
        raise ValueError(
            f"orthogonal codebook needs V*M <= D, got {p.V * p.M} > {p.D}"
        )
    rng = derive_rng(seed, STREAM_INIT, 1)
    g = rng.standard_normal((p.D, p.V * p.M))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))[None, :]  # canonical column signs
    rows = q.T * np.sqrt(p.D / p.V)
    return Codebook(p, rows.reshape(p.V, p.M, p.D))


@dataclass(frozen=True)
class CorrStats:
    """Aggregated |row_i . row_j| / (D/V) over all layer pairs i != j."""

    max_abs: float
    mean_abs: float
    bin_edges: np.ndarray  # HIST_BINS + 1 edges over [0, max_abs]
    counts: np.ndarray     # (HIST_BINS,) int64

    @property
    def sample_count(self) -> int:
        return int(self.counts.sum())


def cross_correlation(codebook: Codebook) -> CorrStats:
    """Cross-layer codeword correlation statistics.

    Streams one M x M block per ordered layer pair instead of materializing
    the full V x (V-1) x M x M tensor; the histogram uses HIST_BINS uniform
    bins over [0, max_abs].
    """
    e = codebook.entries
    V, M, D = e.shape
    inv_energy = V / D
    pairs = [(i, j) for i in range(V) for j in range(V) if i != j]
    max_abs = 0.0
    total = 0.0
    for i, j in pairs:
        blk = np.abs(e[i] @ e[j].T) * inv_energy
        max_abs = max(max_abs, float(blk.max()))
        total += float(blk.sum())
    count = len(pairs) * M * M
    mean_abs = total / count if count else 0.0
    hi = max_abs if max_abs > 0.0 else 1.0
    edges = np.linspace(0.0, hi, HIST_BINS + 1)
    counts = np.zeros(HIST_BINS, dtype=np.int64)
    for i, j in pairs:
        blk = np.abs(e[i] @ e[j].T) * inv_energy
        counts += np.histogram(blk, bins=edges)[0]
    return CorrStats(max_abs=max_abs, mean_abs=mean_abs, bin_edges=edges, counts=counts)


@dataclass(frozen=True)
class DistStats:
    """Squared distances between superimposed vectors of distinct messages."""

    sample_count: int
    min: float
    mean: float
    bin_edges: np.ndarray
    counts: np.ndarray


def pairwise_distance_stats(codebook: Codebook, n_pairs: int, seed: int) -> DistStats:
    """Sample squared transmit-vector distances for random distinct messages."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    p = codebook.params
    rng = derive_rng(seed, STREAM_ANALYSIS, 0)
    a = rng.integers(0, p.M, size=(n_pairs, p.V), dtype=np.int64)
    b = rng.integers(0, p.M, size=(n_pairs, p.V), dtype=np.int64)
    same = np.all(a == b, axis=1)
    while np.any(same):  # identical tuples are excluded by construction
        b[same] = rng.integers(0, p.M, size=(int(same.sum()), p.V), dtype=np.int64)
        same = np.all(a == b, axis=1)
    layer = np.arange(p.V)[None, :]
    sa = codebook.entries[layer, a].sum(axis=1)
    sb = codebook.entries[layer, b].sum(axis=1)
    d2 = np.einsum("nd,nd->n", sa - sb, sa - sb)
    hi = float(d2.max()) if float(d2.max()) > 0.0 else 1.0
    edges = np.linspace(0.0, hi, HIST_BINS + 1)
    counts = np.histogram(d2, bins=edges)[0]
    return DistStats(
        sample_count=n_pairs,
        min=float(d2.min()),
        mean=float(d2.mean()),
        bin_edges=edges,
        counts=counts,
    )


def save(codebook: Codebook, path) -> None:
    """Write the binary codebook file.

    Layout (little-endian): magic "NOSC", version u32, V u32, M u32, D u32,
    then V*M*D float64 payload in [v][k][d] row-major order.
    """
    p = codebook.params
    energies = codebook.row_energies()
    if np.any(np.abs(energies - p.row_energy) > 1e-9 * p.row_energy):
        raise ValueError("codebook rows must be normalized to energy D/V before save")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, p.V, p.M, p.D))
        fh.write(codebook.entries.astype("<f8", copy=False).tobytes(order="C"))


def load(path, crc_len: int = DEFAULT_CRC_LEN) -> Codebook:
    """Read a codebook file written by save(); round-trips are bit-exact."""
    data = Path(path).read_bytes()
    if len(data) < HEADER_BYTES:
        raise CodebookFormatError(f"file too short for header: {len(data)} bytes")
    magic, version, V, M, D = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CodebookFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise CodebookFormatError(f"unsupported format version {version}")
    try:
        params = new_params(V, M, D, crc_len)
    except ValueError as exc:
        raise CodebookFormatError(f"invalid dimensions in header: {exc}") from exc
    expected = HEADER_BYTES + 8 * V * M * D
    if len(data) != expected:
        raise CodebookFormatError(
            f"payload size mismatch: file has {len(data)} bytes, "
            f"dimensions require {expected}"
        )
    entries = np.frombuffer(data, dtype="<f8", offset=HEADER_BYTES)
    entries = entries.astype(np.float64).reshape(V, M, D)
    return Codebook(params, entries)
