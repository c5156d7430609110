"""Deterministic synthetic danmaku corpus with known ground truth.

Real scored danmaku dumps are not redistributable, so training and the
acceptance checks run against generated corpora: bullets are composed
from a benign phrase pool and an offensive-marker pool (all phrases ship
in the bundled lexicon), a bullet is negative exactly when it contains a
marker, and a small label-noise rate flips some labels to keep the
ceiling honest. Scores follow the quality-score intuition: negatives
skew low.
"""

from __future__ import annotations

import json

from .rng import Rng

# Every phrase below is also an entry in data/lexicon.txt so the
# segmenter recovers it whole.
BENIGN_PHRASES = [
    "哈哈哈", "好看", "精彩", "太棒了", "喜欢", "前方高能", "名场面", "泪目",
    "打卡", "经典", "可爱", "好听", "厉害", "支持", "加油", "感动",
    "绝了", "神仙操作", "好评", "完美",
]
OFFENSIVE_MARKERS = [
    "垃圾", "辣鸡", "笨蛋", "白痴", "废物", "恶心", "滚开", "闭嘴",
    "傻子", "差劲", "烦死了", "丑死了", "太烂了", "脑残",
]
FILLER_PHRASES = [
    "这个", "真的", "感觉", "就是", "今天", "大家", "主播", "视频",
    "弹幕", "一起", "看到", "时候", "第一次", "居然", "片段", "节奏",
]
ASCII_EXTRAS = ["666", "awsl", "233"]

DUPLICATE_RATE = 0.3
DEFAULT_NOISE = 0.05


def _pick(rng: Rng, pool: list[str]) -> str:
    return pool[rng.randint(len(pool))]


def _compose(rng: Rng, negative: bool) -> str:
    parts = []
    n_fillers = 1 + rng.randint(3)
    for _ in range(n_fillers):
        parts.append(_pick(rng, FILLER_PHRASES))
    if negative:
        for _ in range(1 + (rng.uniform() < 0.3)):
            parts.append(_pick(rng, OFFENSIVE_MARKERS))
    else:
        for _ in range(1 + rng.randint(2)):
            parts.append(_pick(rng, BENIGN_PHRASES))
        if rng.uniform() < 0.15:
            parts.append(_pick(rng, ASCII_EXTRAS))
    rng.shuffle(parts)
    # space-pad ASCII runs so adjacent ones stay separate tokens
    out = []
    for p in parts:
        if out and p[0].isascii() and out[-1][-1].isascii():
            out.append(" ")
        out.append(p)
    return "".join(out)


def _draw_counters(rng: Rng, negative: bool) -> tuple[int, int, int]:
    if negative:
        return rng.randint(3), rng.randint(6), rng.randint(3)
    return 2 + rng.randint(10), rng.randint(3), rng.randint(3)


def is_negative_content(content: str) -> bool:
    """Ground-truth rule (before label noise): any offensive marker present."""
    return any(m in content for m in OFFENSIVE_MARKERS)


def generate(size: int, seed: int, noise: float = DEFAULT_NOISE):
    """Build `size` bullet records plus a unique-content label map.

    Returns (records, labels): records are dicts in Tencent corpus
    layout, labels map content -> 0/1 with `noise` of them flipped.
    """
    if size < 10:
        raise ValueError("size must be >= 10")
    rng = Rng(seed)
    records = []
    seen: list[str] = []
    for i in range(size):
        if seen and rng.uniform() < DUPLICATE_RATE:
            content = seen[rng.randint(len(seen))]
            negative = is_negative_content(content)
        else:
            negative = rng.uniform() < 0.5
            content = _compose(rng, negative)
            seen.append(content)
        up, fr, op = _draw_counters(rng, negative)
        records.append(
            {
                "commentid": f"syn{i:06d}",
                "content": content,
                "upcount": up,
                "isfriend": fr,
                "isop": op,
            }
        )

    labels = {}
    for content in seen:
        label = 0 if is_negative_content(content) else 1
        if rng.uniform() < noise:
            label = 1 - label
        labels[content] = label
    return records, labels


def write_corpus(records, labels, corpus_path, labels_path) -> None:
    blob = json.dumps({"comments": records}, ensure_ascii=False, separators=(",", ":"))
    with open(corpus_path, "w", encoding="utf-8") as fout:
        fout.write(blob)
    with open(labels_path, "w", encoding="utf-8") as fout:
        for content, label in labels.items():
            fout.write(f"{content}\t{label}\n")
