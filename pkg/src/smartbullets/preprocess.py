"""Text pipeline: segmentation, stopword removal, aggregation, labeling, encoding.

Segmentation is forward maximum matching (FMM): greedy left-to-right
longest-lexicon-word matching with two fallbacks, a maximal ASCII
alphanumeric run and finally a single character, so the tokenizer is
total over arbitrary UTF-8. Whitespace is dropped and acts as a token
boundary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import ScoredRecord
from .errors import InvalidFraction
from .rng import Rng

PAD_INDEX = 0
UNK_INDEX = 1


@dataclass(frozen=True)
class Lexicon:
    words: frozenset[str]
    max_word_len: int

    @classmethod
    def from_words(cls, words) -> "Lexicon":
        ws = frozenset(w for w in words if w)
        return cls(words=ws, max_word_len=max((len(w) for w in ws), default=1))

    @classmethod
    def from_file(cls, path) -> "Lexicon":
        with open(path, encoding="utf-8") as fin:
            return cls.from_words(line.strip() for line in fin)


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset[str]

    @classmethod
    def from_words(cls, words) -> "StopwordSet":
        return cls(words=frozenset(w for w in words if w))

    @classmethod
    def from_file(cls, path) -> "StopwordSet":
        with open(path, encoding="utf-8") as fin:
            return cls.from_words(line.strip() for line in fin)


@dataclass(frozen=True)
class LabeledExample:
    tokens: tuple[str, ...]
    label: int  # 1 = positive/keep, 0 = negative/remove
    score: int


@dataclass(frozen=True)
class Vocabulary:
    """token -> index map; index 0 is PAD, index 1 is UNK, tokens start at 2."""

    token_to_index: dict[str, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.token_to_index) + 2

    def index_of(self, token: str) -> int:
        return self.token_to_index.get(token, UNK_INDEX)

    def tokens_in_order(self) -> list[str]:
        """Tokens sorted by index; position i holds the token with index i+2."""
        return [t for t, _ in sorted(self.token_to_index.items(), key=lambda kv: kv[1])]

    @classmethod
    def from_token_list(cls, tokens: list[str]) -> "Vocabulary":
        return cls(token_to_index={t: i + 2 for i, t in enumerate(tokens)})


def _ascii_alnum(ch: str) -> bool:
    return ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ("0" <= ch <= "9")


def tokenize(text: str, lex: Lexicon) -> list[str]:
    """Segment text by forward maximum matching over the lexicon.

    At each position: longest lexicon word wins; otherwise a maximal run
    of ASCII alphanumerics forms one token; otherwise the single
    character stands alone. Whitespace is dropped. The concatenation of
    the output equals the input with whitespace removed.
    """
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        matched = None
        for k in range(min(lex.max_word_len, n - i), 0, -1):
            cand = text[i : i + k]
            if cand in lex.words:
                matched = cand
                break
        if matched is not None:
            out.append(matched)
            i += len(matched)
        elif _ascii_alnum(ch):
            j = i + 1
            while j < n and _ascii_alnum(text[j]):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            out.append(ch)
            i += 1
    return out


def remove_stopwords(tokens: list[str], stop: StopwordSet) -> list[str]:
    return [t for t in tokens if t not in stop.words]


def aggregate(records: list[ScoredRecord]) -> list[ScoredRecord]:
    """Merge records with identical content by summing scores.

    Output order is the first occurrence of each content.
    """
    sums: dict[str, int] = {}
    for r in records:
        sums[r.content] = sums.get(r.content, 0) + r.score
    return [ScoredRecord(content=c, score=s) for c, s in sums.items()]


def apply_labels(
    records: list[ScoredRecord],
    labels: dict[str, int],
    lex: Lexicon,
    stop: StopwordSet,
) -> tuple[list[LabeledExample], int]:
    """Attach labels and tokenize; unlabeled records are dropped.

    Returns (examples, dropped_empty) where dropped_empty counts labeled
    records whose token list became empty after preprocessing.
    """
    examples = []
    dropped_empty = 0
    for r in records:
        if r.content not in labels:
            continue
        tokens = remove_stopwords(tokenize(r.content, lex), stop)
        if not tokens:
            dropped_empty += 1
            continue
        examples.append(
            LabeledExample(tokens=tuple(tokens), label=int(labels[r.content]), score=r.score)
        )
    return examples, dropped_empty


def split_train_test(examples: list, test_fraction: float, seed: int) -> tuple[list, list]:
    """Deterministic shuffled split: test gets floor(n * fraction) examples."""
    if not 0.0 < test_fraction < 1.0:
        raise InvalidFraction(f"test_fraction must be in (0, 1), got {test_fraction}")
    order = list(range(len(examples)))
    Rng(seed).shuffle(order)
    n_test = int(len(examples) * test_fraction)
    test = [examples[i] for i in order[:n_test]]
    train = [examples[i] for i in order[n_test:]]
    return train, test


def build_vocabulary(examples: list[LabeledExample], min_count: int = 1) -> Vocabulary:
    """Index tokens with corpus frequency >= min_count.

    Indices 2..V-1 go in descending-frequency order, ties broken
    lexicographically; 0 and 1 stay reserved for PAD and UNK.
    """
    counts = Counter()
    for ex in examples:
        counts.update(ex.tokens)
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    return Vocabulary.from_token_list(kept)


def encode(tokens, vocab: Vocabulary, max_len: int) -> list[int]:
    """Map tokens to indices (UNK for unknowns), truncate, right-pad with PAD."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    ids = [vocab.index_of(t) for t in list(tokens)[:max_len]]
    ids.extend([PAD_INDEX] * (max_len - len(ids)))
    return ids


def load_labels(path) -> dict[str, int]:
    """Label file: UTF-8 TSV lines 'content<TAB>0|1' (1 = positive/keep)."""
    labels: dict[str, int] = {}
    with open(path, encoding="utf-8") as fin:
        for lineno, line in enumerate(fin, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            content, sep, lab = line.rpartition("\t")
            if not sep or lab not in ("0", "1"):
                raise ValueError(f"{path}:{lineno}: expected 'content<TAB>0|1'")
            labels[content] = int(lab)
    return labels
