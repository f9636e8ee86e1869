"""Monte-Carlo packet/bit error estimation over Eb/N0 grids.

Every trial owns a private noise stream derived from (master_seed,
trial_index), so a sweep is a pure function of its configuration: the same
config produces byte-identical result files whether trials run inline or
across a process pool.  Early stopping is decided at fixed chunk boundaries
for the same reason.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import STREAM_TRIAL, awgn, derive_rng, ebn0_to_n0
from .codebook import Codebook, load
from .codec import (
    bits_to_indices,
    encode,
    hard_decision,
    indices_to_bits,
    map_marginals,
    to_complex,
    to_real,
)
from .crc import CRC11, CrcSpec, crc_append
from .kbest import kbest_search, select_first_valid

MODES = ("one-shot", "kbest-crc")
EB_CONVENTIONS = ("all-bits", "info-only")


@dataclass
class SweepConfig:
    codebook: Union[str, Codebook]
    ebn0_grid: list
    k: int = 128
    mode: str = "kbest-crc"
    max_trials: int = 10**6
    target_errors: int = 100
    seed: int = 0
    eb_convention: str = "all-bits"
    workers: int = 1       # execution detail; never changes results
    chunk_size: int = 1024

    def __post_init__(self):
        if len(self.ebn0_grid) == 0:
            raise ValueError("ebn0 grid must be non-empty")
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if self.target_errors < 1:
            raise ValueError("target_errors must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.eb_convention not in EB_CONVENTIONS:
            raise ValueError(f"eb convention must be one of {EB_CONVENTIONS}")
        if self.k < 1 or self.workers < 1 or self.chunk_size < 1:
            raise ValueError("k, workers and chunk_size must be >= 1")


@dataclass(frozen=True)
class PerPoint:
    ebn0_db: float
    trials: int
    packet_errors: int
    bit_errors: int
    bits_per_trial: int

    @property
    def per(self) -> float:
        return self.packet_errors / self.trials

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.bits_per_trial)

    @property
    def ci95(self) -> float:
        p = self.per
        return 1.96 * math.sqrt(p * (1.0 - p) / self.trials)


@dataclass(frozen=True)
class PerCurve:
    points: list
    config: dict  # statistical configuration echo (execution details excluded)


def run_trial(
    codebook: Codebook,
    n0: float,
    k: int,
    mode: str,
    trial_index: int,
    master_seed: int,
    spec: CrcSpec = CRC11,
):
    """One end-to-end packet; returns (packet_error, bit_errors).

    A packet error is any mismatch between decoded and transmitted bits as
    well as a detected list-decoding failure.  Bit errors are counted over
    the full total_bits word; on a detected failure they are counted against
    the best-scoring candidate.
    """
    p = codebook.params
    rng = derive_rng(master_seed, STREAM_TRIAL, trial_index)
    info = rng.integers(0, 2, size=p.info_bits).astype(np.uint8)
    tx_bits = crc_append(info, spec)
    tx_idx = bits_to_indices(tx_bits, p)
    s = encode(tx_idx, codebook)
    y = to_real(awgn(to_complex(s), n0, rng))
    # decisions are invariant to the assumed noise power, so the noiseless
    # case can decode with any positive stand-in
    l = map_marginals(y, codebook, n0 if n0 > 0 else 1.0)
    failed = False
    if mode == "one-shot":
        dec_bits = indices_to_bits(hard_decision(l), p)
    elif mode == "kbest-crc":
        cands = kbest_search(l, k)
        res = select_first_valid(cands, p, spec)
        if res.status == "success":
            dec_bits = res.bits
        else:
            failed = True
            dec_bits = indices_to_bits(cands.indices[0], p)
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    bit_errors = int(np.count_nonzero(dec_bits != tx_bits))
    return (failed or bit_errors > 0), bit_errors


def _trial_range(codebook, n0, k, mode, start, stop, master_seed):
    packet_errors = 0
    bit_errors = 0
    for t in range(start, stop):
        pe, be = run_trial(codebook, n0, k, mode, t, master_seed)
        packet_errors += int(pe)
        bit_errors += be
    return packet_errors, bit_errors


def _partition(start: int, stop: int, parts: int):
    """Split [start, stop) into at most `parts` contiguous non-empty ranges."""
    n = stop - start
    parts = min(parts, n)
    bounds = [start + (n * i) // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def run_per_sweep(config: SweepConfig) -> PerCurve:
    """Estimate PER/BER at every grid point with early stopping.

    Each point runs chunks of config.chunk_size trials until target_errors
    packet errors are seen or max_trials is reached; the executed trial set
    therefore never depends on the worker count.
    """
    cb = load(config.codebook) if isinstance(config.codebook, str) else config.codebook
    pool = (
        ProcessPoolExecutor(max_workers=config.workers)
        if config.workers > 1
        else None
    )
    points = []
    try:
        for ebn0 in config.ebn0_grid:
            n0 = ebn0_to_n0(ebn0, cb.params, config.eb_convention)
            trials = packet_errors = bit_errors = 0
            while trials < config.max_trials and packet_errors < config.target_errors:
                n = min(config.chunk_size, config.max_trials - trials)
                start, stop = trials, trials + n
                if pool is None:
                    pe, be = _trial_range(
                        cb, n0, config.k, config.mode, start, stop, config.seed
                    )
                else:
                    futures = [
                        pool.submit(
                            _trial_range, cb, n0, config.k, config.mode, a, b,
                            config.seed,
                        )
                        for a, b in _partition(start, stop, config.workers)
                    ]
                    pe = be = 0
                    for fut in futures:
                        dpe, dbe = fut.result()
                        pe += dpe
                        be += dbe
                trials += n
                packet_errors += pe
                bit_errors += be
            points.append(
                PerPoint(
                    ebn0_db=float(ebn0),
                    trials=trials,
                    packet_errors=packet_errors,
                    bit_errors=bit_errors,
                    bits_per_trial=cb.params.total_bits,
                )
            )
    finally:
        if pool is not None:
            pool.shutdown()
    return PerCurve(points=points, config=_config_echo(config, cb))


def _config_echo(config: SweepConfig, cb: Codebook) -> dict:
    p = cb.params
    return {
        "codebook": config.codebook if isinstance(config.codebook, str) else "<in-memory>",
        "V": p.V,
        "M": p.M,
        "D": p.D,
        "crc_len": p.crc_len,
        "total_bits": p.total_bits,
        "ebn0_grid": [float(x) for x in config.ebn0_grid],
        "k": config.k,
        "mode": config.mode,
        "max_trials": config.max_trials,
        "target_errors": config.target_errors,
        "seed": config.seed,
        "eb_convention": config.eb_convention,
        "chunk_size": config.chunk_size,
    }


CSV_HEADER = "ebn0_db,trials,packet_errors,bit_errors,per,ber,ci95"


def emit_results(curve: PerCurve, path, fmt: str = "csv") -> None:
    """Write one record per grid point as CSV or JSON."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for pt in curve.points:
            lines.append(
                f"{pt.ebn0_db!r},{pt.trials},{pt.packet_errors},{pt.bit_errors},"
                f"{pt.per!r},{pt.ber!r},{pt.ci95!r}"
            )
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "config": curve.config,
            "points": [
                {
                    "ebn0_db": pt.ebn0_db,
                    "trials": pt.trials,
                    "packet_errors": pt.packet_errors,
                    "bit_errors": pt.bit_errors,
                    "per": pt.per,
                    "ber": pt.ber,
                    "ci95": pt.ci95,
                }
                for pt in curve.points
            ],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)
