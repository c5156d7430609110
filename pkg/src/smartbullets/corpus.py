"""Danmaku corpus ingestion: Tencent-style JSON, Bilibili-style XML, quality score.

Both wire formats are pure functions over bytes; everything here is safe
to call concurrently.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from xml.etree import ElementTree

from .errors import BadRecord, MalformedInput

DISPLAY_MODES = (1, 4, 5)  # 1 scroll, 4 bottom, 5 top


@dataclass(frozen=True)
class Bullet:
    """One raw comment record with its upvote attributes."""

    comment_id: str
    content: str
    upcount: int = 0
    is_friend: int = 0
    is_op: int = 0


@dataclass(frozen=True)
class ScoredRecord:
    content: str
    score: int


@dataclass(frozen=True)
class DisplayBullet:
    """One on-screen bullet with its display attributes."""

    appear_time: float
    mode: int
    font_size: int
    color: int
    send_timestamp: int
    pool: int
    user_hash: str
    row_id: str
    content: str


@dataclass
class DanmakuFile:
    video_id: str
    bullets: list[DisplayBullet] = field(default_factory=list)


def score(b: Bullet) -> int:
    """Quality score: upcount - is_friend + is_op (may be negative)."""
    return b.upcount - b.is_friend + b.is_op


def _counter(rec: dict, key: str, index: int) -> int:
    v = rec.get(key, 0)
    if isinstance(v, bool) or not isinstance(v, int):
        raise BadRecord(index, f"{key} is not an integer")
    if v < 0:
        raise BadRecord(index, f"{key} is negative")
    return v


def parse_tencent_json(data: bytes) -> list[Bullet]:
    """Parse a Tencent-style corpus dump: {"comments": [{commentid, content, upcount, isfriend, isop}, ...]}.

    Missing counter keys default to 0; unknown extra keys are ignored.
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedInput(f"not UTF-8 JSON: {e}") from e
    if not isinstance(doc, dict) or not isinstance(doc.get("comments"), list):
        raise MalformedInput('root must be an object with a "comments" array')

    bullets = []
    for i, rec in enumerate(doc["comments"]):
        if not isinstance(rec, dict):
            raise BadRecord(i, "not an object")
        cid = rec.get("commentid")
        content = rec.get("content")
        if not isinstance(cid, str) or not cid:
            raise BadRecord(i, "missing or empty commentid")
        if not isinstance(content, str):
            raise BadRecord(i, "missing content")
        bullets.append(
            Bullet(
                comment_id=cid,
                content=content,
                upcount=_counter(rec, "upcount", i),
                is_friend=_counter(rec, "isfriend", i),
                is_op=_counter(rec, "isop", i),
            )
        )
    return bullets


def _parse_p(p: str, index: int) -> DisplayBullet:
    parts = p.split(",", 7)
    if len(parts) < 8:
        raise BadRecord(index, f'p attribute has {len(parts)} fields, need 8')
    try:
        appear_time = float(parts[0])
        mode = int(parts[1])
        font_size = int(parts[2])
        color = int(parts[3])
        send_timestamp = int(parts[4])
        pool = int(parts[5])
    except ValueError as e:
        raise BadRecord(index, f"non-numeric field in p attribute: {e}") from e
    if appear_time < 0:
        raise BadRecord(index, "negative appear time")
    if mode not in DISPLAY_MODES:
        raise BadRecord(index, f"mode {mode} not in {DISPLAY_MODES}")
    return DisplayBullet(
        appear_time=appear_time,
        mode=mode,
        font_size=font_size,
        color=color,
        send_timestamp=send_timestamp,
        pool=pool,
        user_hash=parts[6],
        row_id=parts[7],
        content="",
    )


def parse_bilibili_xml(data: bytes) -> DanmakuFile:
    """Parse a Bilibili-style danmaku XML file.

    Root <i> holds a <chatid> (or <oid>) giving the video id and zero or
    more <d p="time,mode,size,color,ts,pool,hash,row">text</d> elements.
    """
    try:
        root = ElementTree.fromstring(data.decode("utf-8"))
    except (UnicodeDecodeError, ElementTree.ParseError) as e:
        raise MalformedInput(f"not XML: {e}") from e
    if root.tag != "i":
        raise MalformedInput(f"root element is <{root.tag}>, expected <i>")
    cid_el = root.find("chatid")
    if cid_el is None:
        cid_el = root.find("oid")
    if cid_el is None or cid_el.text is None or not cid_el.text.strip():
        raise MalformedInput("no <chatid> or <oid> element")
    video_id = cid_el.text.strip()

    bullets = []
    for i, d in enumerate(root.findall("d")):
        p = d.get("p")
        if p is None:
            raise BadRecord(i, "missing p attribute")
        db = _parse_p(p, i)
        bullets.append(dataclasses.replace(db, content=d.text or ""))
    return DanmakuFile(video_id=video_id, bullets=bullets)


def _format_time(t: float) -> str:
    # repr gives the shortest decimal that round-trips the double
    return repr(float(t))


def serialize_bilibili_xml(f: DanmakuFile) -> bytes:
    """Inverse of parse_bilibili_xml: parse(serialize(f)) == f field-for-field."""
    root = ElementTree.Element("i")
    cid = ElementTree.SubElement(root, "chatid")
    cid.text = f.video_id
    for b in f.bullets:
        d = ElementTree.SubElement(root, "d")
        d.set(
            "p",
            ",".join(
                [
                    _format_time(b.appear_time),
                    str(b.mode),
                    str(b.font_size),
                    str(b.color),
                    str(b.send_timestamp),
                    str(b.pool),
                    b.user_hash,
                    b.row_id,
                ]
            ),
        )
        d.text = b.content
    return ElementTree.tostring(root, encoding="utf-8", xml_declaration=True)
