"""CRC generation and checking for list-decoding candidate validation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

# x^11 + x^10 + x^9 + x^5 + x + 1 (3GPP NR CRC11), MSB-first with the
# degree-11 coefficient explicit; zero initial register, no final XOR.
CRC11_POLY = 0b1110_0010_0011


@dataclass(frozen=True)
class CrcSpec:
    length: int = 11
    poly: int = CRC11_POLY

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("crc length must be >= 1")
        if self.poly >> self.length != 1:
            raise ValueError("generator polynomial degree must equal length")


CRC11 = CrcSpec()


def crc_append(info_bits, spec: CrcSpec = CRC11) -> np.ndarray:
    """Append spec.length parity bits: remainder of info * x^length mod poly."""
    bits = _as_bit_array(info_bits)
    if bits.size == 0:
        raise ValueError("info_bits must be non-empty")
    padded = np.concatenate([bits, np.zeros(spec.length, dtype=np.uint8)])
    rem = int(_backend.crc_remainder(padded, spec.poly, spec.length))
    shifts = np.arange(spec.length - 1, -1, -1)
    parity = ((rem >> shifts) & 1).astype(np.uint8)
    return np.concatenate([bits, parity])


def crc_check(bits, spec: CrcSpec = CRC11) -> bool:
    """True iff the whole word is divisible by the generator polynomial."""
    word = _as_bit_array(bits)
    if word.size <= spec.length:
        raise ValueError(f"word must be longer than {spec.length} bits")
    return int(_backend.crc_remainder(word, spec.poly, spec.length)) == 0


def _as_bit_array(bits) -> np.ndarray:
    arr = np.asarray(bits).astype(np.uint8, copy=False).ravel()
    if np.any(arr > 1):
        raise ValueError("bits must be 0 or 1")
    return np.ascontiguousarray(arr)
