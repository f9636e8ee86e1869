"""Codebook learning by direct gradient descent on the decoder cross-entropy.

Raw weights W (V x M x D) are unconstrained; the transmitted codebook is the
row-wise projection sqrt(D/V) * W / ||W||, so every iterate satisfies the
equal-energy constraint and gradients flow through the projection Jacobian.
Each step draws fresh uniform index tuples and fresh channel noise, encodes
with the projected codebook, decodes with the log-domain marginal decoder,
and minimizes the summed per-layer cross-entropy with Adam under a linearly
interpolated learning rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import STREAM_INIT, STREAM_TRAIN, derive_rng, ebn0_to_n0
from .codebook import Codebook, CodeParams, cross_correlation, normalize_rows


class TrainingDivergedError(RuntimeError):
    """Raised when the training loss stops being finite."""


@dataclass
class TrainConfig:
    params: CodeParams
    steps: int
    train_snr_db: float = -1.5
    batch_size: int = 1024
    lr_start: float = 2e-4
    lr_end: float = 2e-6
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    log_interval: int = 50

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not (self.lr_start >= self.lr_end > 0):
            raise ValueError("need lr_start >= lr_end > 0")
        if self.log_interval < 1:
            raise ValueError("log_interval must be >= 1")


@dataclass
class TrainState:
    w: np.ndarray   # raw (V, M, D) weights
    m1: np.ndarray  # Adam first moments
    m2: np.ndarray  # Adam second moments
    step: int = 0


@dataclass
class TrainingLog:
    steps: list = field(default_factory=list)
    loss: list = field(default_factory=list)
    lr: list = field(default_factory=list)
    corr_mean: list = field(default_factory=list)
    corr_max: list = field(default_factory=list)
    loss_history: list = field(default_factory=list)  # every step, not just intervals

    def append(self, step, loss, lr, corr_mean, corr_max):
        self.steps.append(int(step))
        self.loss.append(float(loss))
        self.lr.append(float(lr))
        self.corr_mean.append(float(corr_mean))
        self.corr_max.append(float(corr_max))

    def write_csv(self, path) -> None:
        lines = ["step,loss,lr,corr_mean,corr_max"]
        for i in range(len(self.steps)):
            lines.append(
                f"{self.steps[i]},{self.loss[i]!r},{self.lr[i]!r},"
                f"{self.corr_mean[i]!r},{self.corr_max[i]!r}"
            )
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def init_state(params: CodeParams, seed: int) -> TrainState:
    """Standard-normal raw weights; same draw as random_codebook(params, seed)."""
    w = derive_rng(seed, STREAM_INIT, 0).standard_normal(
        (params.V, params.M, params.D)
    )
    return TrainState(w=w, m1=np.zeros_like(w), m2=np.zeros_like(w))


def codebook_view(w: np.ndarray) -> np.ndarray:
    """Equal-energy projection of raw weights (row-wise)."""
    return normalize_rows(w)


def forward_loss(state, indices, noise, n0: float) -> float:
    """Mean summed cross-entropy of the marginal decoder over the batch.

    indices is (B, V) transmitted tuples, noise is the (B, D) additive real
    noise (variance n0/2 per dimension for a matched channel), both held
    fixed by the caller so losses are comparable across calls.
    """
    loss, _ = _loss_and_grad(_weights_of(state), indices, noise, n0, want_grad=False)
    return loss


def backward(state, indices, noise, n0: float) -> np.ndarray:
    """Exact gradient of forward_loss with respect to the raw weights.

    Includes both coupling paths (through the transmitted signal and through
    the correlation templates) and the row-normalization Jacobian.
    """
    _, grad = _loss_and_grad(_weights_of(state), indices, noise, n0, want_grad=True)
    return grad


def _weights_of(state) -> np.ndarray:
    w = state.w if isinstance(state, TrainState) else state
    return np.asarray(w, dtype=np.float64)


def _loss_and_grad(w, indices, noise, n0, want_grad):
    if n0 <= 0:
        raise ValueError("n0 must be positive")
    V, M, D = w.shape
    idx = np.asarray(indices, dtype=np.int64)
    eta = np.asarray(noise, dtype=np.float64)
    B = idx.shape[0]
    if idx.shape != (B, V) or eta.shape != (B, D):
        raise ValueError("batch shapes do not match the weight table")

    norms = np.sqrt(np.einsum("vmd,vmd->vm", w, w))
    if np.any(norms == 0.0):
        raise ValueError("zero-energy codeword row cannot be normalized")
    scale = np.sqrt(D / V)
    c = w * (scale / norms)[:, :, None]

    layer = np.arange(V)[None, :]
    y = c[layer, idx].sum(axis=1) + eta                       # (B, D)
    a = (2.0 / n0) * np.einsum("bd,vmd->bvm", y, c)           # scores
    amax = a.max(axis=2, keepdims=True)
    z = np.exp(a - amax)
    zsum = z.sum(axis=2, keepdims=True)
    lse = amax[..., 0] + np.log(zsum[..., 0])                 # (B, V)
    a_true = np.take_along_axis(a, idx[:, :, None], axis=2)[..., 0]
    loss = float((lse - a_true).sum() / B)
    if not want_grad:
        return loss, None

    g = z / zsum                                              # softmax probs
    taken = np.take_along_axis(g, idx[:, :, None], axis=2)
    np.put_along_axis(g, idx[:, :, None], taken - 1.0, axis=2)
    g /= B
    # template path: scores see every codeword directly
    gc = (2.0 / n0) * np.einsum("bvm,bd->vmd", g, y)
    # signal path: transmitted rows also enter through y
    q = (2.0 / n0) * np.einsum("bvm,vmd->bd", g, c)
    for v in range(V):
        np.add.at(gc[v], idx[:, v], q)
    # row-normalization Jacobian: scale/||w|| * (I - unit unit^T)
    unit = w / norms[:, :, None]
    radial = np.einsum("vmd,vmd->vm", gc, unit)
    grad = (scale / norms)[:, :, None] * (gc - radial[:, :, None] * unit)
    return loss, grad


def adam_step(
    state: TrainState,
    grad: np.ndarray,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> TrainState:
    """One bias-corrected Adam update; mutates and returns state."""
    state.step += 1
    t = state.step
    state.m1 = beta1 * state.m1 + (1.0 - beta1) * grad
    state.m2 = beta2 * state.m2 + (1.0 - beta2) * grad * grad
    mhat = state.m1 / (1.0 - beta1**t)
    vhat = state.m2 / (1.0 - beta2**t)
    state.w = state.w - lr * mhat / (np.sqrt(vhat) + eps)
    return state


def learning_rate(config: TrainConfig, step: int) -> float:
    """Linear interpolation from lr_start (step 0) to lr_end (last step)."""
    if config.steps == 1:
        return config.lr_start
    frac = step / (config.steps - 1)
    return config.lr_start + (config.lr_end - config.lr_start) * frac


def train(config: TrainConfig) -> tuple[Codebook, TrainingLog]:
    """Run the full optimization; deterministic for a fixed config.seed."""
    p = config.params
    n0 = ebn0_to_n0(config.train_snr_db, p)
    sigma = np.sqrt(n0 / 2.0)
    state = init_state(p, config.seed)
    log = TrainingLog()
    for t in range(config.steps):
        lr = learning_rate(config, t)
        rng = derive_rng(config.seed, STREAM_TRAIN, t)
        idx = rng.integers(0, p.M, size=(config.batch_size, p.V), dtype=np.int64)
        noise = sigma * rng.standard_normal((config.batch_size, p.D))
        loss, grad = _loss_and_grad(state.w, idx, noise, n0, want_grad=True)
        if not np.isfinite(loss):
            raise TrainingDivergedError(
                f"non-finite loss {loss} at step {t} (lr={lr:.3g})"
            )
        log.loss_history.append(loss)
        adam_step(state, grad, lr, config.beta1, config.beta2, config.eps)
        if t % config.log_interval == 0 or t == config.steps - 1:
            stats = cross_correlation(Codebook(p, codebook_view(state.w)))
            log.append(t, loss, lr, stats.mean_abs, stats.max_abs)
    return Codebook(p, codebook_view(state.w)), log
