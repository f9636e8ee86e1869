"""Brute-force verification routes.

Everything here deliberately avoids the production code paths: posteriors by
full hypothesis enumeration, list search by scoring every tuple, CRC by
array-based long division, gradients by central finite differences.  The
test suite and the `oracle` CLI subcommand compare these against the fast
implementations.
"""

from __future__ import annotations

import numpy as np

from .channel import STREAM_ANALYSIS, awgn, derive_rng, ebn0_to_n0
from .codebook import Codebook, new_params, orthogonal_codebook
from .codec import encode, map_marginals, to_complex, to_real
from .crc import CRC11, CrcSpec, crc_append, crc_check
from .kbest import kbest_search
from .trainer import backward, forward_loss, init_state


def all_tuples(V: int, M: int) -> np.ndarray:
    """All M^V index tuples in lexicographic order, shape (M^V, V)."""
    return np.indices((M,) * V).reshape(V, -1).T.astype(np.int64)


def exact_posterior_marginals(y, codebook: Codebook, n0: float) -> np.ndarray:
    """Posterior marginals by enumerating every transmit hypothesis.

    Works in the log domain on the full Gaussian likelihood exp(-|y-s|^2/n0),
    making no orthogonality or constant-energy assumption.
    """
    p = codebook.params
    tuples = all_tuples(p.V, p.M)
    layer = np.arange(p.V)[None, :]
    s_all = codebook.entries[layer, tuples].sum(axis=1)  # (M^V, D)
    diff = np.asarray(y)[None, :] - s_all
    logw = -np.einsum("nd,nd->n", diff, diff) / n0
    logw -= logw.max()
    w = np.exp(logw)
    total = w.sum()
    marginals = np.zeros((p.V, p.M))
    for v in range(p.V):
        for m in range(p.M):
            marginals[v, m] = w[tuples[:, v] == m].sum() / total
    return marginals


def brute_force_top_k(logprobs: np.ndarray, k: int):
    """Top-k tuples by exhaustive scoring.

    Scores accumulate layer by layer in the same order as the beam search so
    ties are bit-comparable; equal scores resolve to the lexicographically
    smaller tuple via a stable sort over the lexicographically ordered
    tuple enumeration.
    """
    l = np.asarray(logprobs, dtype=np.float64)
    V, M = l.shape
    tuples = all_tuples(V, M)
    scores = l[0][tuples[:, 0]].copy()
    for v in range(1, V):
        scores = scores + l[v][tuples[:, v]]
    order = np.argsort(-scores, kind="stable")[: min(k, scores.size)]
    return tuples[order], scores[order]


def long_division_remainder(bits, poly_bits: np.ndarray) -> np.ndarray:
    """Remainder of a bit-array polynomial via explicit long division."""
    g = np.asarray(poly_bits, dtype=np.uint8)
    deg = g.size - 1
    msg = np.asarray(bits, dtype=np.uint8).copy()
    if msg.size < deg:
        raise ValueError("word shorter than the generator degree")
    for i in range(msg.size - deg):
        if msg[i]:
            msg[i : i + deg + 1] ^= g
    return msg[-deg:]


def poly_bits(spec: CrcSpec) -> np.ndarray:
    """Generator polynomial as an MSB-first coefficient array."""
    shifts = np.arange(spec.length, -1, -1)
    return ((spec.poly >> shifts) & 1).astype(np.uint8)


def crc_append_by_division(info_bits, spec: CrcSpec) -> np.ndarray:
    """Independent crc_append: long division of info * x^length."""
    info = np.asarray(info_bits, dtype=np.uint8)
    padded = np.concatenate([info, np.zeros(spec.length, dtype=np.uint8)])
    return np.concatenate([info, long_division_remainder(padded, poly_bits(spec))])


def finite_difference_gradient(w, indices, noise, n0, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of the training loss w.r.t. raw weights."""
    w = np.asarray(w, dtype=np.float64)
    grad = np.zeros_like(w)
    it = np.nditer(w, flags=["multi_index"])
    while not it.finished:
        ix = it.multi_index
        wp = w.copy()
        wp[ix] += h
        lp = forward_loss(wp, indices, noise, n0)
        wm = w.copy()
        wm[ix] -= h
        lm = forward_loss(wm, indices, noise, n0)
        grad[ix] = (lp - lm) / (2.0 * h)
        it.iternext()
    return grad


def max_relative_error(a, b, floor: float = 1e-8) -> float:
    """Elementwise |a-b| / max(|a|, |b|, floor), reduced to the maximum."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float((np.abs(a - b) / denom).max())


# ---------------------------------------------------------------------------
# named suites for the `oracle` CLI subcommand


def run_map_suite(seed: int = 0, trials: int = 100):
    """Marginal decoder vs exact enumeration on orthogonal codebooks."""
    worst = 0.0
    for V, M, D in ((2, 4, 16), (3, 4, 16)):
        cb = orthogonal_codebook(new_params(V, M, D, crc_len=min(11, V * 2 - 1)), seed)
        n0 = ebn0_to_n0(0.0, cb.params)
        for t in range(trials):
            rng = derive_rng(seed, STREAM_ANALYSIS, t + 1000 * V)
            idx = rng.integers(0, M, size=V)
            y = to_real(awgn(to_complex(encode(idx, cb)), n0, rng))
            got = np.exp(map_marginals(y, cb, n0))
            want = exact_posterior_marginals(y, cb, n0)
            worst = max(worst, float(np.abs(got - want).max()))
    return worst < 1e-9, f"max abs deviation {worst:.3e}"


def run_kbest_suite(seed: int = 0, instances: int = 100):
    """Beam search vs exhaustive top-k on random log-probability matrices."""
    V, M = 3, 8
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        raw = rng.standard_normal((V, M)) * rng.uniform(0.5, 3.0)
        mx = raw.max(axis=1, keepdims=True)
        l = raw - (mx + np.log(np.exp(raw - mx).sum(axis=1, keepdims=True)))
        for k in (1, 4, 16, 64):
            got = kbest_search(l, k)
            want_idx, want_scores = brute_force_top_k(l, k)
            if not (
                np.array_equal(got.indices, want_idx)
                and np.array_equal(got.scores, want_scores)
            ):
                return False, f"mismatch at k={k}"
    return True, f"{instances} instances, k in (1, 4, 16, 64)"


def run_crc_suite(seed: int = 0, words: int = 1000):
    """Fast CRC vs array long division, plus exhaustive single-flip detection."""
    rng = np.random.default_rng(seed)
    for _ in range(words):
        info = rng.integers(0, 2, size=22).astype(np.uint8)
        if not np.array_equal(crc_append(info), crc_append_by_division(info, CRC11)):
            return False, "append mismatch vs long division"
    info = rng.integers(0, 2, size=33).astype(np.uint8)
    word = crc_append(info)
    for pos in range(word.size):
        flipped = word.copy()
        flipped[pos] ^= 1
        if crc_check(flipped):
            return False, f"missed single-bit flip at position {pos}"
    return True, f"{words} random words, all {word.size} single flips detected"


def run_gradient_suite(seed: int = 0):
    """Analytic gradient vs central finite differences on small configs."""
    worst = 0.0
    for V, M, D in ((2, 4, 8), (3, 8, 16)):
        params = new_params(V, M, D, crc_len=min(11, V * int(np.log2(M)) - 1))
        state = init_state(params, seed)
        rng = np.random.default_rng(seed + V)
        idx = rng.integers(0, M, size=(4, V))
        n0 = ebn0_to_n0(-1.5, params)
        noise = np.sqrt(n0 / 2.0) * rng.standard_normal((4, D))
        analytic = backward(state, idx, noise, n0)
        numeric = finite_difference_gradient(state.w, idx, noise, n0)
        worst = max(worst, max_relative_error(analytic, numeric))
    return worst < 1e-5, f"max relative error {worst:.3e}"
