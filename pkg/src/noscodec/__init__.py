"""Near-orthogonal superposition codec for short-packet AWGN links.

The transmit vector is the sum of V codewords, one per layer, drawn from
learnable equal-energy codebooks.  Decoding computes per-layer posterior
log-marginals from scaled correlations, optionally followed by CRC-assisted
K-best list search; a Monte-Carlo harness estimates packet and bit error
rates over Eb/N0 grids.

Hot kernels (beam pruning, CRC bit loops) run in a compiled extension when
it was built, with a numpy fallback selected automatically at import; see
noscodec.backend_name().
"""

from ._backend import backend_name
from .channel import awgn, derive_rng, ebn0_to_n0
from .codebook import (
    Codebook,
    CodebookFormatError,
    CodeParams,
    CorrStats,
    DistStats,
    cross_correlation,
    load,
    new_params,
    normalize,
    orthogonal_codebook,
    pairwise_distance_stats,
    random_codebook,
    save,
)
from .codec import (
    bits_to_indices,
    encode,
    hard_decision,
    indices_to_bits,
    map_marginals,
    to_complex,
    to_real,
)
from .crc import CRC11, CrcSpec, crc_append, crc_check
from .harness import (
    PerCurve,
    PerPoint,
    SweepConfig,
    emit_results,
    run_per_sweep,
    run_trial,
)
from .kbest import (
    Candidate,
    CandidateList,
    DecodeResult,
    crc_assisted_decode,
    kbest_search,
)
from .trainer import (
    TrainConfig,
    TrainingDivergedError,
    TrainingLog,
    TrainState,
    adam_step,
    backward,
    forward_loss,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "CRC11",
    "Candidate",
    "CandidateList",
    "Codebook",
    "CodebookFormatError",
    "CodeParams",
    "CorrStats",
    "CrcSpec",
    "DecodeResult",
    "DistStats",
    "PerCurve",
    "PerPoint",
    "SweepConfig",
    "TrainConfig",
    "TrainingDivergedError",
    "TrainingLog",
    "TrainState",
    "adam_step",
    "awgn",
    "backend_name",
    "backward",
    "bits_to_indices",
    "crc_append",
    "crc_assisted_decode",
    "crc_check",
    "cross_correlation",
    "derive_rng",
    "ebn0_to_n0",
    "emit_results",
    "encode",
    "forward_loss",
    "hard_decision",
    "indices_to_bits",
    "kbest_search",
    "load",
    "map_marginals",
    "new_params",
    "normalize",
    "orthogonal_codebook",
    "pairwise_distance_stats",
    "random_codebook",
    "run_per_sweep",
    "run_trial",
    "save",
    "to_complex",
    "to_real",
    "train",
]
