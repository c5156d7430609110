"""Paths of the data files bundled with the package."""

from importlib import resources
from pathlib import Path


def _data(name: str) -> Path:
    return Path(str(resources.files("smartbullets").joinpath("data", name)))


def default_lexicon_path() -> Path:
    return _data("lexicon.txt")


def default_stopwords_path() -> Path:
    return _data("stopwords.txt")


def sample_danmaku_path() -> Path:
    return _data("sample_danmaku.xml")
