import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smartbullets.corpus import (
    Bullet,
    DanmakuFile,
    DisplayBullet,
    parse_bilibili_xml,
    parse_tencent_json,
    score,
    serialize_bilibili_xml,
)
from smartbullets.errors import BadRecord, MalformedInput


def tencent(records) -> bytes:
    return json.dumps({"comments": records}).encode()


class TestParseTencentJson:
    def test_direct_field_mapping(self):
        out = parse_tencent_json(
            tencent([{"commentid": "a1", "content": "x", "upcount": 5, "isfriend": 2, "isop": 1}])
        )
        assert out == [Bullet("a1", "x", 5, 2, 1)]

    def test_empty_corpus(self):
        assert parse_tencent_json(tencent([])) == []

    def test_missing_counters_default_to_zero(self):
        out = parse_tencent_json(tencent([{"commentid": "a", "content": "y", "isop": 3}]))
        assert out[0].upcount == 0
        assert out[0].is_friend == 0
        assert out[0].is_op == 3

    def test_extra_keys_ignored(self):
        out = parse_tencent_json(
            tencent([{"commentid": "a", "content": "y", "upcount": 1, "weird": [1, 2]}])
        )
        assert out[0] == Bullet("a", "y", 1, 0, 0)

    def test_order_preserved(self):
        recs = [{"commentid": f"c{i}", "content": str(i)} for i in range(20)]
        out = parse_tencent_json(tencent(recs))
        assert [b.comment_id for b in out] == [f"c{i}" for i in range(20)]

    @pytest.mark.parametrize(
        "data",
        [b"not json", b"[1,2]", b'{"nope": []}', b'{"comments": 5}', b"\xff\xfe"],
    )
    def test_malformed_top_level(self, data):
        with pytest.raises(MalformedInput):
            parse_tencent_json(data)

    @pytest.mark.parametrize(
        "rec",
        [
            {"content": "x"},                            # no id
            {"commentid": "", "content": "x"},           # empty id
            {"commentid": "a"},                          # no content
            {"commentid": "a", "content": 5},            # content not str
            {"commentid": "a", "content": "x", "upcount": -1},
            {"commentid": "a", "content": "x", "upcount": "5"},
            {"commentid": "a", "content": "x", "isfriend": True},
            "not a dict",
        ],
    )
    def test_bad_record_carries_index(self, rec):
        good = {"commentid": "ok", "content": "fine"}
        with pytest.raises(BadRecord) as err:
            parse_tencent_json(tencent([good, rec]))
        assert err.value.index == 1


class TestScore:
    def test_examples(self):
        assert score(Bullet("a", "", 5, 2, 1)) == 4
        assert score(Bullet("a", "", 0, 0, 0)) == 0
        assert score(Bullet("a", "", 1, 5, 0)) == -4

    @given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 1000))
    def test_linear_in_upcount(self, up, fr, op, k):
        base = score(Bullet("a", "", up, fr, op))
        assert score(Bullet("a", "", up + k, fr, op)) == base + k


SAMPLE_XML = (
    b'<i><chatid>77</chatid>'
    b'<d p="1.5,1,25,16777215,1500000000,0,ab12,1">hi</d></i>'
)


class TestParseBilibiliXml:
    def test_direct_field_mapping(self):
        f = parse_bilibili_xml(SAMPLE_XML)
        assert f.video_id == "77"
        assert len(f.bullets) == 1
        b = f.bullets[0]
        assert b == DisplayBullet(1.5, 1, 25, 16777215, 1500000000, 0, "ab12", "1", "hi")

    def test_entity_decoding(self):
        f = parse_bilibili_xml(
            b'<i><chatid>1</chatid><d p="0,1,25,0,0,0,h,r">&amp;</d></i>'
        )
        assert f.bullets[0].content == "&"

    def test_document_order(self):
        doc = b'<i><chatid>9</chatid>' + b"".join(
            f'<d p="{i}.0,1,25,0,0,0,h,r">c{i}</d>'.encode() for i in range(3)
        ) + b"</i>"
        f = parse_bilibili_xml(doc)
        assert [b.content for b in f.bullets] == ["c0", "c1", "c2"]

    def test_oid_fallback(self):
        f = parse_bilibili_xml(b"<i><oid>55</oid></i>")
        assert f.video_id == "55"
        assert f.bullets == []

    @pytest.mark.parametrize(
        "data",
        [b"garbage", b"<x><chatid>1</chatid></x>", b"<i></i>", b"<i><chatid/></i>"],
    )
    def test_malformed(self, data):
        with pytest.raises(MalformedInput):
            parse_bilibili_xml(data)

    @pytest.mark.parametrize(
        "p",
        ["1,1,25,0,0,0,h", "x,1,25,0,0,0,h,r", "1,zz,25,0,0,0,h,r", "1,2,25,0,0,0,h,r", "-1,1,25,0,0,0,h,r"],
    )
    def test_bad_record(self, p):
        doc = f'<i><chatid>1</chatid><d p="0,1,25,0,0,0,h,r">ok</d><d p="{p}">bad</d></i>'.encode()
        with pytest.raises(BadRecord) as err:
            parse_bilibili_xml(doc)
        assert err.value.index == 1

    def test_missing_p(self):
        with pytest.raises(BadRecord):
            parse_bilibili_xml(b"<i><chatid>1</chatid><d>x</d></i>")


xml_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
    max_size=30,
)
plain_token = st.text(alphabet="abcdef0123456789", min_size=1, max_size=10)


@st.composite
def display_bullets(draw):
    return DisplayBullet(
        appear_time=draw(st.floats(min_value=0, max_value=1e8, allow_nan=False)),
        mode=draw(st.sampled_from([1, 4, 5])),
        font_size=draw(st.integers(1, 100)),
        color=draw(st.integers(0, 0xFFFFFF)),
        send_timestamp=draw(st.integers(0, 2**40)),
        pool=draw(st.integers(0, 2)),
        user_hash=draw(plain_token),
        row_id=draw(plain_token),
        content=draw(xml_text),
    )


@st.composite
def danmaku_files(draw):
    return DanmakuFile(
        video_id=draw(st.text(alphabet="0123456789", min_size=1, max_size=9)),
        bullets=draw(st.lists(display_bullets(), max_size=8)),
    )


class TestXmlRoundTrip:
    def test_empty_file(self):
        blob = serialize_bilibili_xml(DanmakuFile(video_id="77", bullets=[]))
        again = parse_bilibili_xml(blob)
        assert again.video_id == "77" and again.bullets == []

    def test_single_bullet_round_trip(self):
        f = parse_bilibili_xml(SAMPLE_XML)
        assert parse_bilibili_xml(serialize_bilibili_xml(f)) == f

    def test_markup_characters_escaped(self):
        f = DanmakuFile("1", [DisplayBullet(0.0, 1, 25, 0, 0, 0, "h", "r", 'a<b>&"c')])
        blob = serialize_bilibili_xml(f)
        assert b"&lt;" in blob
        assert parse_bilibili_xml(blob) == f

    def test_serialization_is_stable(self):
        f = parse_bilibili_xml(SAMPLE_XML)
        assert serialize_bilibili_xml(f) == serialize_bilibili_xml(f)

    @settings(max_examples=150)
    @given(danmaku_files())
    def test_round_trip_property(self, f):
        assert parse_bilibili_xml(serialize_bilibili_xml(f)) == f
