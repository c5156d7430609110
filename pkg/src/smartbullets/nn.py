"""Numeric kernel for the sentence classifier.

Layer set: embedding lookup, multi-width 1-D convolution with relu and
max-over-time pooling, inverted dropout, dense layer with softmax, cross
entropy. Gradients are hand-derived; everything is float64.

All functions also exist in batched form (leading batch axis) because
training runs whole mini-batches through BLAS; the per-example entry
points delegate to the batched code with B=1 so there is exactly one
implementation of the math. Batch reductions are single matmuls, so the
summation order is fixed and results are reproducible.

Max-over-time ties route gradient to the first argmax window (numpy
argmax convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, ShapeMismatch, WindowTooWide
from .rng import Rng

PROB_FLOOR = 1e-12


def embed_lookup(indices, E: np.ndarray) -> np.ndarray:
    """Gather rows of E: output row i is E[indices[i]]. PAD rows are ordinary rows."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size == 0:
        raise IndexOutOfRange("need at least one index")
    if idx.min() < 0 or idx.max() >= E.shape[0]:
        raise IndexOutOfRange(
            f"index outside [0, {E.shape[0]}): {idx.min()}..{idx.max()}"
        )
    return E[idx]


def _im2col(xb: np.ndarray, h: int) -> np.ndarray:
    """(B, L, d) -> (B, L-h+1, h*d): each row flattens one width-h window."""
    B, L, d = xb.shape
    P = L - h + 1
    xcol = np.empty((B, P, h, d), dtype=np.float64)
    for i in range(h):
        xcol[:, :, i, :] = xb[:, i : i + P, :]
    return xcol.reshape(B, P, h * d)


def conv_max_batch(xb: np.ndarray, W: np.ndarray, b: np.ndarray):
    """Convolution + relu + max-over-time for a batch.

    xb: (B, L, d); W: (h*d, m); b: (m,).
    Returns (pooled (B, m), argmax (B, m), xcol (B, P, h*d)).
    """
    B, L, d = xb.shape
    if W.shape[0] % d != 0:
        raise ShapeMismatch(f"filter rows {W.shape[0]} not a multiple of embed dim {d}")
    h = W.shape[0] // d
    if L < h:
        raise WindowTooWide(f"sequence length {L} < filter width {h}")
    xcol = _im2col(xb, h)
    P = xcol.shape[1]
    act = np.maximum(xcol.reshape(B * P, h * d) @ W + b, 0.0).reshape(B, P, W.shape[1])
    argmax = act.argmax(axis=1)
    pooled = np.take_along_axis(act, argmax[:, None, :], axis=1)[:, 0, :]
    return pooled, argmax, xcol


def conv_max(x: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-window relu(flatten(x[i:i+h]) @ W + b), maxed over all positions."""
    pooled, _, _ = conv_max_batch(np.asarray(x, dtype=np.float64)[None], W, b)
    return pooled[0]


def dropout(z: np.ndarray, rate: float, rng: Rng | None, training: bool):
    """Inverted dropout: survivors scaled by 1/(1-rate) so inference is identity.

    Returns (output, mask); the mask is multiplicative (0 or 1/(1-rate)),
    all-ones outside training or at rate 0.
    """
    if not training or rate == 0.0:
        mask = np.ones_like(z)
        return z * mask, mask
    if rng is None:
        raise ValueError("training dropout needs an rng")
    u = rng.uniform(z.size).reshape(z.shape)
    mask = (u >= rate) / (1.0 - rate)
    return z * mask, mask


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def dense_softmax(z: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Class probabilities softmax(z @ W + b), max-subtracted for stability."""
    return softmax(z @ W + b)


def cross_entropy(probs: np.ndarray, label: int) -> float:
    """-ln(probs[label]) with the probability floored at 1e-12."""
    return float(-np.log(max(float(probs[label]), PROB_FLOOR)))


@dataclass
class Cache:
    """Everything one training forward pass retains for backward."""

    indices: np.ndarray                 # (B, L) int64
    vocab_size: int
    widths: tuple[int, ...]             # ascending; fixes segment order in z
    conv_params: dict[int, tuple[np.ndarray, np.ndarray]]
    dense_w: np.ndarray
    dense_b: np.ndarray
    xcol: dict[int, np.ndarray]         # h -> (B, P_h, h*d)
    argmax: dict[int, np.ndarray]       # h -> (B, m)
    pooled: dict[int, np.ndarray]       # h -> (B, m)
    dropout_mask: np.ndarray            # (B, K)
    z_dropped: np.ndarray               # (B, K)
    probs: np.ndarray                   # (B, 2)


def backward(cache: Cache, labels) -> list[np.ndarray]:
    """Gradients of the mean cross-entropy over the cached batch.

    Returns arrays in canonical parameter order:
    [E, then (W_h, b_h) per ascending width, dense_W, dense_b].
    """
    y = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    B = cache.probs.shape[0]
    if y.shape[0] != B:
        raise ShapeMismatch(f"{y.shape[0]} labels for batch of {B}")

    dlogits = cache.probs.copy()
    dlogits[np.arange(B), y] -= 1.0
    dlogits /= B

    d_dense_w = cache.z_dropped.T @ dlogits
    d_dense_b = dlogits.sum(axis=0)
    dz = (dlogits @ cache.dense_w.T) * cache.dropout_mask

    _, L = cache.indices.shape
    h0 = cache.widths[0]
    d = cache.conv_params[h0][0].shape[0] // h0
    dxb = np.zeros((B, L, d), dtype=np.float64)
    dE = np.zeros((cache.vocab_size, d), dtype=np.float64)
    conv_grads = []
    offset = 0
    for h in cache.widths:
        W, _ = cache.conv_params[h]
        m = W.shape[1]
        hd = W.shape[0]
        xcol = cache.xcol[h]
        P = xcol.shape[1]

        g = dz[:, offset : offset + m] * (cache.pooled[h] > 0.0)
        offset += m
        dpre = np.zeros((B, P, m), dtype=np.float64)
        np.put_along_axis(dpre, cache.argmax[h][:, None, :], g[:, None, :], axis=1)

        dW = xcol.reshape(B * P, hd).T @ dpre.reshape(B * P, m)
        db = dpre.sum(axis=(0, 1))
        conv_grads.extend([dW, db])

        dxcol = (dpre.reshape(B * P, m) @ W.T).reshape(B, P, h, d)
        for i in range(h):
            dxb[:, i : i + P, :] += dxcol[:, :, i, :]

    np.add.at(dE, cache.indices.ravel(), dxb.reshape(B * L, -1))
    return [dE, *conv_grads, d_dense_w, d_dense_b]


@dataclass
class AdamState:
    """First/second moment accumulators plus the shared step counter."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def init_like(cls, params: list[np.ndarray], **kw) -> "AdamState":
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
            **kw,
        )


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    lr: float,
) -> tuple[list[np.ndarray], AdamState]:
    """One bias-corrected Adam update, in place on params and state."""
    if not (len(params) == len(grads) == len(state.m) == len(state.v)):
        raise ShapeMismatch("params/grads/state lengths disagree")
    for p, g, m in zip(params, grads, state.m):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatch(f"shape {g.shape} vs parameter {p.shape}")
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * np.square(g)
        p -= lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return params, state
