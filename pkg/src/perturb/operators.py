"""Seeded perturbation operators.

Character-level budgets are floor(s * C) with C the number of non-whitespace
characters; word-level budgets are floor(s * n). Every operator is a pure
function of its input, severity and seed.
"""
import logging
import math
import random
import re
from dataclasses import dataclass
from typing import Sequence

from core import detokenize, is_content_word, strip_edges, tokenize

from .lexicon import SynonymLexicon

logger = logging.getLogger(__name__)

SHUFFLE_WINDOW = 3
_AFFIXES = re.compile(r"^([\W_]*)(.*?)([\W_]*)$", re.DOTALL)


@dataclass(frozen=True)
class EditResult:
    text: str
    budget: int | None
    applied: int

    @property
    def words(self) -> list[str]:
        return tokenize(self.text)

    @property
    def shortfall(self) -> int:
        return 0 if self.budget is None else self.budget - self.applied


def edit_budget(severity: float, count: int) -> int:
    # round first so 0.1 * 30 style products cannot floor one short
    return math.floor(round(severity * count, 9))


def count_characters(text: str) -> int:
    return sum(1 for c in text if not c.isspace())


def swap_adjacent(text: str, i: int) -> str:
    chars = list(text)
    chars[i], chars[i + 1] = chars[i + 1], chars[i]
    return "".join(chars)


def permute_window(words: Sequence[str], anchor: int, permutation: Sequence[int]) -> list[str]:
    """Reorder words[anchor:anchor+len(permutation)] so slot j receives window[permutation[j]]."""
    out = list(words)
    window = out[anchor:anchor + len(permutation)]
    out[anchor:anchor + len(window)] = [window[j] for j in permutation if j < len(window)]
    return out


def char_swap(text: str, severity: float, seed: int) -> EditResult:
    budget = edit_budget(severity, count_characters(text))
    positions = [i for i in range(len(text) - 1) if not text[i].isspace() and not text[i + 1].isspace()]
    applied = min(budget, len(positions))
    if applied < budget:
        logger.warning(f"char_swap budget {budget} clamped to {applied} valid positions")
    if applied == 0:
        return EditResult(text, budget, 0)
    rng = random.Random(seed)
    out = text
    for i in rng.sample(positions, applied):
        out = swap_adjacent(out, i)
    return EditResult(out, budget, applied)


def char_delete(text: str, severity: float, seed: int) -> EditResult:
    budget = edit_budget(severity, count_characters(text))
    spans = [m.span() for m in re.finditer(r"\S+", text)]
    capacity = sum(end - start - 1 for start, end in spans)
    applied = min(budget, capacity)
    if applied < budget:
        logger.warning(f"char_delete budget {budget} clamped to {applied}: every word keeps one character")
    if applied == 0:
        return EditResult(text, budget, 0)

    owner = {}
    for w, (start, end) in enumerate(spans):
        for pos in range(start, end):
            owner[pos] = w
    remaining = [end - start for start, end in spans]

    rng = random.Random(seed)
    order = sorted(owner)
    rng.shuffle(order)
    deleted = set()
    for pos in order:
        if len(deleted) == applied:
            break
        w = owner[pos]
        if remaining[w] > 1:
            remaining[w] -= 1
            deleted.add(pos)
    out = "".join(c for i, c in enumerate(text) if i not in deleted)
    return EditResult(out, budget, applied)


def _substitute(token: str, synonym: str) -> str:
    prefix, core, suffix = _AFFIXES.match(token).groups()
    if core[:1].isupper():
        synonym = synonym[:1].upper() + synonym[1:]
    return f"{prefix}{synonym}{suffix}"


def synonym_replace(words: Sequence[str], severity: float, seed: int, lexicon: SynonymLexicon) -> EditResult:
    words = list(words)
    budget = edit_budget(severity, len(words))
    eligible = [i for i, w in enumerate(words) if is_content_word(w) and lexicon.candidates(strip_edges(w))]
    applied = min(budget, len(eligible))
    if applied < budget:
        logger.info(f"synonym_replace shortfall: {budget - applied} of {budget} positions had no synonym")
    if applied:
        rng = random.Random(seed)
        for i in rng.sample(eligible, applied):
            candidates = lexicon.candidates(strip_edges(words[i]))
            words[i] = _substitute(words[i], rng.choice(candidates))
    return EditResult(detokenize(words), budget, applied)


def word_delete(words: Sequence[str], severity: float, seed: int, max_draws: int = 100) -> EditResult:
    words = list(words)
    n = len(words)
    budget = edit_budget(severity, n)
    k = min(budget, max(n - 1, 0))
    if k == 0:
        return EditResult(detokenize(words), budget, 0)

    rng = random.Random(seed)
    content = [i for i, w in enumerate(words) if is_content_word(w)]
    if not content:
        logger.warning("word_delete input has no content word; deleting without the safeguard")
        chosen = set(rng.sample(range(n), k))
    else:
        content_set = set(content)
        chosen = None
        for _ in range(max_draws):
            draw = set(rng.sample(range(n), k))
            if content_set - draw:
                chosen = draw
                break
        if chosen is None:
            keep = rng.choice(content)
            chosen = set(rng.sample([i for i in range(n) if i != keep], k))
    kept = [w for i, w in enumerate(words) if i not in chosen]
    return EditResult(detokenize(kept), budget, k)


def word_shuffle(words: Sequence[str], severity: float, seed: int, window: int = SHUFFLE_WINDOW) -> EditResult:
    words = list(words)
    budget = edit_budget(severity, len(words))
    if budget == 0 or len(words) < 2:
        return EditResult(detokenize(words), budget, 0)
    rng = random.Random(seed)
    anchors = sorted(rng.sample(range(len(words)), budget))
    for anchor in anchors:
        permutation = list(range(len(words[anchor:anchor + window])))
        rng.shuffle(permutation)
        words = permute_window(words, anchor, permutation)
    return EditResult(detokenize(words), budget, budget)
