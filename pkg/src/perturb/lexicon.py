"""Synonym lexicon: the WordNet role, loaded from a plain TAB-separated file.

File format, UTF-8, one entry per line::

    word<TAB>syn1,syn2,...

Blank lines and lines starting with ``#`` are ignored.
"""
import logging
import re
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from core.errors import ConfigurationError

logger = logging.getLogger(__name__)

# WordNet marks adjective positions as e.g. "good(a)"
_SYNTACTIC_MARKER = re.compile(r"\([a-z]+\)$")


class SynonymLexicon:
    def __init__(self, entries: Mapping[str, Sequence[str]] | None = None):
        self._entries: dict[str, tuple[str, ...]] = {}
        for word, candidates in (entries or {}).items():
            self.add(word, candidates)

    def add(self, word: str, candidates: Iterable[str]) -> None:
        key = word.strip().lower()
        if not key:
            return
        existing = list(self._entries.get(key, ()))
        for candidate in candidates:
            candidate = candidate.strip()
            if not candidate or candidate.lower() == key or any(c.isspace() for c in candidate):
                continue
            if candidate not in existing:
                existing.append(candidate)
        if existing:
            self._entries[key] = tuple(existing)

    def candidates(self, word: str) -> tuple[str, ...]:
        return self._entries.get(word.lower(), ())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()


def load_lexicon(path: str | Path) -> SynonymLexicon:
    lexicon = SynonymLexicon()
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ConfigurationError(f"{path}:{number}: expected 'word<TAB>syn1,syn2,...'")
            word, synonyms = line.split("\t", 1)
            lexicon.add(word, synonyms.split(","))
    logger.info(f"Loaded {len(lexicon)} lexicon entries from {path}")
    return lexicon


def save_lexicon(lexicon: SynonymLexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for word, candidates in sorted(lexicon.items()):
            f.write(f"{word}\t{','.join(candidates)}\n")


def lexicon_from_wordnet(paths: Iterable[str | Path]) -> SynonymLexicon:
    """Convert WordNet ``data.noun``/``data.verb``/``data.adj``/``data.adv`` files.

    Every single-token lemma of a synset becomes a candidate for every other
    lemma of the same synset. Multi-word lemmas (joined by ``_``) are dropped
    because a replacement must stay one token.
    """
    lexicon = SynonymLexicon()
    for path in paths:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if line.startswith("  ") or not line.strip():
                    continue  # license header
                fields = line.split()
                word_count = int(fields[3], 16)
                lemmas = []
                for j in range(word_count):
                    lemma = _SYNTACTIC_MARKER.sub("", fields[4 + 2 * j]).lower()
                    if "_" not in lemma and lemma not in lemmas:
                        lemmas.append(lemma)
                for lemma in lemmas:
                    lexicon.add(lemma, [other for other in lemmas if other != lemma])
    logger.info(f"Built a {len(lexicon)}-entry lexicon from WordNet data files")
    return lexicon
