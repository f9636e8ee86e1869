"""AWGN channel, Eb/N0 accounting, and reproducible noise streams."""

from __future__ import annotations

import numpy as np

# Stream domains for counter-based generator derivation.  Every consumer of
# randomness owns a (master_seed, domain, index) triple, so results never
# depend on execution order or worker count.
STREAM_TRIAL = 0
STREAM_TRAIN = 1
STREAM_INIT = 2
STREAM_ANALYSIS = 3

_DOMAIN_SHIFT = 56
_INDEX_MASK = (1 << _DOMAIN_SHIFT) - 1


def derive_rng(master_seed: int, domain: int, index: int) -> np.random.Generator:
    """Independent Philox stream keyed by (master_seed, domain, index)."""
    if index < 0 or index > _INDEX_MASK:
        raise ValueError(f"stream index {index} out of range")
    key = (
        np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF),
        np.uint64((domain << _DOMAIN_SHIFT) | index),
    )
    return np.random.Generator(np.random.Philox(key=key))


def ebn0_to_n0(ebn0_db: float, params, eb_convention: str = "all-bits") -> float:
    """Noise power per complex dimension for a given Eb/N0 in dB.

    Total transmit energy is D (V rows of energy D/V each).  The "all-bits"
    convention divides it by every transmitted bit including CRC parity;
    "info-only" divides by payload bits alone.
    """
    if eb_convention == "all-bits":
        n_bits = params.total_bits
    elif eb_convention == "info-only":
        n_bits = params.info_bits
    else:
        raise ValueError(f"unknown eb convention: {eb_convention!r}")
    eb = params.D / n_bits
    return eb * 10.0 ** (-ebn0_db / 10.0)


def awgn(signal, n0: float, rng: np.random.Generator) -> np.ndarray:
    """Add circular complex Gaussian noise, variance n0 per complex element."""
    if n0 < 0:
        raise ValueError("n0 must be >= 0")
    z = np.asarray(signal, dtype=np.complex128)
    if n0 == 0:
        return z.copy()
    w = rng.standard_normal((2, z.size))
    return z + np.sqrt(n0 / 2.0) * (w[0] + 1j * w[1])
