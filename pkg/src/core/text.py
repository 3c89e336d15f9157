"""Word segmentation and the content-word rule shared by every module.

A word is a maximal run of non-whitespace characters. Nothing here knows about
model tokenizers; the models only ever see the strings these helpers produce.
"""
import re
from functools import lru_cache
from pathlib import Path

STOPWORDS_PATH = Path(__file__).with_name("stopwords.txt")

_EDGE = re.compile(r"^[\W_]+|[\W_]+$")


def tokenize(text: str) -> list[str]:
    return text.split()


def detokenize(words) -> str:
    return " ".join(words)


def strip_edges(token: str) -> str:
    """Lowercase a token and drop non-alphanumeric characters at both ends."""
    return _EDGE.sub("", token.lower())


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    entries = []
    with open(STOPWORDS_PATH, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return frozenset(entries)


def is_content_word(token: str) -> bool:
    core = strip_edges(token)
    return bool(core) and core not in stopwords()
