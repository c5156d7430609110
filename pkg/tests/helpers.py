"""Shared test utilities: independent oracles and tiny fixture builders.

The oracles here deliberately reimplement behavior with the dumbest
possible code (plain loops, whole-lexicon scans, finite differences) so
they share nothing with the implementation they check.
"""

from __future__ import annotations

import numpy as np

from smartbullets import classifier, nn
from smartbullets.rng import Rng


def fmm_oracle(text: str, words: set[str]) -> list[str]:
    """Reference segmentation: scan every lexicon word at every position."""
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        best = ""
        for w in words:
            if text.startswith(w, i) and len(w) > len(best):
                best = w
        if best:
            out.append(best)
            i += len(best)
            continue
        if ch.isascii() and ch.isalnum():
            j = i
            while j < len(text) and text[j].isascii() and text[j].isalnum():
                j += 1
            out.append(text[i:j])
            i = j
        else:
            out.append(ch)
            i += 1
    return out


def conv_max_oracle(x: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exhaustive window enumeration with python loops."""
    L, d = x.shape
    h = W.shape[0] // d
    m = W.shape[1]
    best = np.full(m, -np.inf)
    for i in range(L - h + 1):
        window = x[i : i + h].reshape(h * d)
        c = np.maximum(window @ W + b, 0.0)
        best = np.maximum(best, c)
    return best


def model_loss(model: classifier.ModelParams, encoded, label: int, dropout_seed=None) -> float:
    """Scalar loss of one example; a fixed dropout seed freezes the mask."""
    rng = Rng(dropout_seed) if dropout_seed is not None else None
    probs, _ = classifier.forward(
        model, encoded, training=dropout_seed is not None, rng=rng
    )
    return nn.cross_entropy(probs, label)


def fd_gradients(
    model: classifier.ModelParams, encoded, label: int, eps: float = 1e-5, dropout_seed=None
) -> list[np.ndarray]:
    """Central finite differences of model_loss wrt every parameter element."""
    grads = []
    for p in model.param_list():
        g = np.zeros_like(p)
        flat_p = p.reshape(-1)
        flat_g = g.reshape(-1)
        for k in range(flat_p.size):
            orig = flat_p[k]
            flat_p[k] = orig + eps
            up = model_loss(model, encoded, label, dropout_seed)
            flat_p[k] = orig - eps
            down = model_loss(model, encoded, label, dropout_seed)
            flat_p[k] = orig
            flat_g[k] = (up - down) / (2 * eps)
        grads.append(g)
    return grads


def max_relative_error(analytic: list[np.ndarray], numeric: list[np.ndarray]) -> float:
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.abs(a) + np.abs(n), 1e-6)
        worst = max(worst, float((np.abs(a - n) / denom).max()))
    return worst


def tiny_random_model(
    vocab_size=20, embed_dim=5, widths=(2, 3), feature_maps=4, max_len=7, seed=123, dropout=0.0
) -> classifier.ModelParams:
    cfg = classifier.ModelConfig(
        vocab_size=vocab_size,
        embed_dim=embed_dim,
        filter_widths=widths,
        feature_maps=feature_maps,
        dropout_rate=dropout,
        max_len=max_len,
        seed=seed,
    )
    return classifier.init_model(cfg)
