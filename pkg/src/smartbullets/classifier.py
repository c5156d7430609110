"""Sentence classifier: model assembly, training loop, metrics, persistence.

The architecture is the usual convolutional sentence model: trainable
embeddings, one convolution bank per filter width with relu and
max-over-time pooling, the pooled features concatenated (ascending width
order), dropout, then a dense softmax head with two classes. Class 0 is
negative (low quality / remove), class 1 is positive (keep).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import nn
from .errors import EmptyDataset, FormatError
from .preprocess import (
    LabeledExample,
    Lexicon,
    StopwordSet,
    Vocabulary,
    encode,
    remove_stopwords,
    tokenize,
)
from .rng import Rng

MODEL_MAGIC = "smartbullets-model"
MODEL_VERSION = 1
EVAL_CHUNK = 256


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    embed_dim: int = 128
    filter_widths: tuple[int, ...] = (3, 4, 5)
    feature_maps: int = 100
    dropout_rate: float = 0.5
    max_len: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "filter_widths", tuple(sorted(set(self.filter_widths))))
        if self.vocab_size < 2:
            raise ValueError("vocab_size must be >= 2 (PAD and UNK)")
        if self.embed_dim < 1:
            raise ValueError("embed_dim must be >= 1")
        if not self.filter_widths:
            raise ValueError("need at least one filter width")
        if any(h < 1 or h > self.max_len for h in self.filter_widths):
            raise ValueError(f"filter widths {self.filter_widths} must lie in [1, max_len]")
        if self.feature_maps < 1:
            raise ValueError("feature_maps must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")


@dataclass
class ModelParams:
    config: ModelConfig
    E: np.ndarray                                   # (V, d)
    conv: dict[int, tuple[np.ndarray, np.ndarray]]  # h -> (W (h*d, m), b (m,))
    dense_w: np.ndarray                             # (len(widths)*m, 2)
    dense_b: np.ndarray                             # (2,)
    vocab: Vocabulary = field(default_factory=Vocabulary)

    def param_list(self) -> list[np.ndarray]:
        """Canonical order shared with nn.backward and the Adam state."""
        out = [self.E]
        for h in self.config.filter_widths:
            out.extend(self.conv[h])
        out.extend([self.dense_w, self.dense_b])
        return out


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.001
    batch_size: int = 64
    max_steps: int = 3000
    eval_every: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.lr < 0:
            raise ValueError("lr must be >= 0")
        if self.batch_size < 1 or self.max_steps < 1 or self.eval_every < 1:
            raise ValueError("batch_size, max_steps and eval_every must be >= 1")


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision_negative: float
    recall_negative: float
    loss: float

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision_negative": self.precision_negative,
            "recall_negative": self.recall_negative,
            "loss": self.loss,
        }


@dataclass(frozen=True)
class ReportRow:
    step: int
    train_loss: float | None
    metrics: Metrics


@dataclass
class TrainReport:
    rows: list[ReportRow]
    final: Metrics


@dataclass(frozen=True)
class TextPipeline:
    """Everything needed to turn a raw comment string into model input."""

    lexicon: Lexicon
    stopwords: StopwordSet
    vocab: Vocabulary

    @classmethod
    def for_model(cls, model: ModelParams, lexicon: Lexicon, stopwords: StopwordSet):
        return cls(lexicon=lexicon, stopwords=stopwords, vocab=model.vocab)


def init_model(cfg: ModelConfig, vocab: Vocabulary | None = None) -> ModelParams:
    """Seed-determined initialization.

    E ~ U(-0.25, 0.25) with the PAD row zeroed (still trainable); conv and
    dense weights ~ U(-a, a) with a = sqrt(6 / (fan_in + fan_out)); biases 0.
    Draw order: E, then each conv bank by ascending width, then the dense
    layer.
    """
    rng = Rng(cfg.seed)
    V, d, m = cfg.vocab_size, cfg.embed_dim, cfg.feature_maps
    E = rng.uniform(V * d, -0.25, 0.25).reshape(V, d)
    E[0, :] = 0.0
    conv = {}
    for h in cfg.filter_widths:
        a = math.sqrt(6.0 / (h * d + m))
        W = rng.uniform(h * d * m, -a, a).reshape(h * d, m)
        conv[h] = (W, np.zeros(m))
    K = len(cfg.filter_widths) * m
    a = math.sqrt(6.0 / (K + 2))
    dense_w = rng.uniform(K * 2, -a, a).reshape(K, 2)
    return ModelParams(
        config=cfg,
        E=E,
        conv=conv,
        dense_w=dense_w,
        dense_b=np.zeros(2),
        vocab=vocab if vocab is not None else Vocabulary(),
    )


def forward_batch(
    model: ModelParams,
    X: np.ndarray,
    training: bool = False,
    rng: Rng | None = None,
) -> tuple[np.ndarray, nn.Cache]:
    """Run a (B, L) index batch through the network; returns (probs (B, 2), cache)."""
    cfg = model.config
    X = np.asarray(X, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError(f"expected (B, L) index array, got shape {X.shape}")
    xb = nn.embed_lookup(X.ravel(), model.E).reshape(X.shape[0], X.shape[1], cfg.embed_dim)

    pooled_parts, xcols, argmaxes, pooleds = [], {}, {}, {}
    for h in cfg.filter_widths:
        W, b = model.conv[h]
        pooled, argmax, xcol = nn.conv_max_batch(xb, W, b)
        pooled_parts.append(pooled)
        xcols[h], argmaxes[h], pooleds[h] = xcol, argmax, pooled
    z = np.concatenate(pooled_parts, axis=1)

    z_dropped, mask = nn.dropout(z, cfg.dropout_rate, rng, training)
    probs = nn.dense_softmax(z_dropped, model.dense_w, model.dense_b)

    cache = nn.Cache(
        indices=X,
        vocab_size=cfg.vocab_size,
        widths=cfg.filter_widths,
        conv_params=model.conv,
        dense_w=model.dense_w,
        dense_b=model.dense_b,
        xcol=xcols,
        argmax=argmaxes,
        pooled=pooleds,
        dropout_mask=mask,
        z_dropped=z_dropped,
        probs=probs,
    )
    return probs, cache


def forward(
    model: ModelParams,
    encoded,
    training: bool = False,
    rng: Rng | None = None,
) -> tuple[np.ndarray, nn.Cache]:
    """Single-example forward pass; delegates to the batched path with B=1."""
    probs, cache = forward_batch(
        model, np.asarray(encoded, dtype=np.int64)[None], training=training, rng=rng
    )
    return probs[0], cache


def encode_examples(
    examples: list[LabeledExample], vocab: Vocabulary, max_len: int
) -> tuple[np.ndarray, np.ndarray]:
    """LabeledExamples -> (X (n, max_len) int64, y (n,) int64)."""
    X = np.asarray([encode(ex.tokens, vocab, max_len) for ex in examples], dtype=np.int64)
    y = np.asarray([ex.label for ex in examples], dtype=np.int64)
    return X.reshape(len(examples), max_len), y


def _predict_probs(model: ModelParams, X: np.ndarray) -> np.ndarray:
    parts = []
    for start in range(0, X.shape[0], EVAL_CHUNK):
        probs, _ = forward_batch(model, X[start : start + EVAL_CHUNK], training=False)
        parts.append(probs)
    return np.concatenate(parts, axis=0)


def evaluate(model: ModelParams, X: np.ndarray, y: np.ndarray) -> Metrics:
    """Accuracy, negative-class precision/recall, mean cross-entropy."""
    if len(y) == 0:
        raise EmptyDataset("evaluate needs at least one example")
    probs = _predict_probs(model, X)
    pred = probs.argmax(axis=1)
    accuracy = float((pred == y).mean())
    true_neg = int(((pred == 0) & (y == 0)).sum())
    pred_neg = int((pred == 0).sum())
    actual_neg = int((y == 0).sum())
    precision = true_neg / pred_neg if pred_neg else 0.0
    recall = true_neg / actual_neg if actual_neg else 0.0
    picked = np.maximum(probs[np.arange(len(y)), y], nn.PROB_FLOOR)
    loss = float(-np.log(picked).mean())
    return Metrics(accuracy=accuracy, precision_negative=precision, recall_negative=recall, loss=loss)


def train(
    model: ModelParams,
    train_set: tuple[np.ndarray, np.ndarray],
    test_set: tuple[np.ndarray, np.ndarray],
    tcfg: TrainConfig,
) -> tuple[ModelParams, TrainReport]:
    """Mini-batch Adam training with periodic test-set evaluation.

    Batches come from deterministic shuffled epochs under tcfg.seed (the
    same stream also draws dropout masks). Report rows land at step 0,
    every eval_every steps, and the final step.
    """
    X_train, y_train = train_set
    X_test, y_test = test_set
    n = X_train.shape[0]
    if n == 0:
        raise EmptyDataset("train set is empty")

    rng = Rng(tcfg.seed)
    params = model.param_list()
    state = nn.AdamState.init_like(params)

    rows = [ReportRow(step=0, train_loss=None, metrics=evaluate(model, X_test, y_test))]
    window_losses: list[float] = []
    batch_queue: list[np.ndarray] = []

    for step in range(1, tcfg.max_steps + 1):
        if not batch_queue:
            perm = rng.permutation(n)
            batch_queue = [
                perm[i : i + tcfg.batch_size] for i in range(0, n, tcfg.batch_size)
            ]
        batch = batch_queue.pop(0)
        Xb, yb = X_train[batch], y_train[batch]

        probs, cache = forward_batch(model, Xb, training=True, rng=rng)
        picked = np.maximum(probs[np.arange(len(yb)), yb], nn.PROB_FLOOR)
        window_losses.append(float(-np.log(picked).mean()))

        grads = nn.backward(cache, yb)
        nn.adam_step(params, grads, state, tcfg.lr)

        if step % tcfg.eval_every == 0 or step == tcfg.max_steps:
            metrics = evaluate(model, X_test, y_test)
            rows.append(
                ReportRow(
                    step=step,
                    train_loss=float(np.mean(window_losses)),
                    metrics=metrics,
                )
            )
            window_losses = []

    return model, TrainReport(rows=rows, final=rows[-1].metrics)


def predict_mask(
    model: ModelParams, contents: list[str], pipeline: TextPipeline
) -> list[int]:
    """Positional keep/remove mask: 1 keeps comment i, 0 removes it.

    Contents that tokenize to nothing are kept; there is no signal to
    justify removing them. Inference mode, deterministic.
    """
    mask = [1] * len(contents)
    encoded, positions = [], []
    for i, content in enumerate(contents):
        tokens = remove_stopwords(tokenize(content, pipeline.lexicon), pipeline.stopwords)
        if tokens:
            encoded.append(encode(tokens, pipeline.vocab, model.config.max_len))
            positions.append(i)
    if encoded:
        X = np.asarray(encoded, dtype=np.int64)
        pred = _predict_probs(model, X).argmax(axis=1)
        for pos, p in zip(positions, pred):
            mask[pos] = int(p)
    return mask


def _config_to_dict(cfg: ModelConfig) -> dict:
    return {
        "vocab_size": cfg.vocab_size,
        "embed_dim": cfg.embed_dim,
        "filter_widths": list(cfg.filter_widths),
        "feature_maps": cfg.feature_maps,
        "dropout_rate": cfg.dropout_rate,
        "max_len": cfg.max_len,
        "seed": cfg.seed,
    }


def save_model(model: ModelParams, path) -> None:
    """Write the version-1 JSON model file (stable bytes for identical models)."""
    doc = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "config": _config_to_dict(model.config),
        "vocab": model.vocab.tokens_in_order(),
        "params": {
            "E": model.E.tolist(),
            "conv": {
                str(h): {"W": W.tolist(), "b": b.tolist()}
                for h, (W, b) in sorted(model.conv.items())
            },
            "dense": {"W": model.dense_w.tolist(), "b": model.dense_b.tolist()},
        },
    }
    blob = json.dumps(doc, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
    with open(path, "w", encoding="utf-8") as fout:
        fout.write(blob)


def _array(obj, shape: tuple[int, ...], what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise FormatError(f"{what}: not a numeric array: {e}") from e
    if arr.shape != shape:
        raise FormatError(f"{what}: shape {arr.shape}, expected {shape}")
    if not np.isfinite(arr).all():
        raise FormatError(f"{what}: non-finite values")
    return arr


def load_model(path) -> ModelParams:
    """Read a file produced by save_model; FormatError on anything off."""
    with open(path, encoding="utf-8") as fin:
        raw = fin.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise FormatError(f"not JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("magic") != MODEL_MAGIC:
        raise FormatError("bad magic")
    if doc.get("version") != MODEL_VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    try:
        cdict = dict(doc["config"])
        cdict["filter_widths"] = tuple(cdict["filter_widths"])
        cfg = ModelConfig(**cdict)
        vocab_tokens = list(doc["vocab"])
        params = doc["params"]
        conv_doc = dict(params["conv"])
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad structure: {e}") from e
    if len(vocab_tokens) + 2 != cfg.vocab_size:
        raise FormatError(
            f"vocab of {len(vocab_tokens)} tokens inconsistent with vocab_size {cfg.vocab_size}"
        )

    V, d, m = cfg.vocab_size, cfg.embed_dim, cfg.feature_maps
    E = _array(params.get("E"), (V, d), "E")
    conv = {}
    for h in cfg.filter_widths:
        bank = conv_doc.get(str(h))
        if not isinstance(bank, dict):
            raise FormatError(f"missing conv bank for width {h}")
        conv[h] = (
            _array(bank.get("W"), (h * d, m), f"conv{h}.W"),
            _array(bank.get("b"), (m,), f"conv{h}.b"),
        )
    K = len(cfg.filter_widths) * m
    dense = params.get("dense", {})
    dense_w = _array(dense.get("W"), (K, 2), "dense.W")
    dense_b = _array(dense.get("b"), (2,), "dense.b")
    return ModelParams(
        config=cfg,
        E=E,
        conv=conv,
        dense_w=dense_w,
        dense_b=dense_b,
        vocab=Vocabulary.from_token_list(vocab_tokens),
    )
