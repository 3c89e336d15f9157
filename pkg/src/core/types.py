"""Immutable domain types shared across the pipeline."""
import math
from dataclasses import dataclass, field
from functools import cached_property

from .text import tokenize

SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LabelSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ValueError(f"a label set needs at least 2 labels, got {labels}")
        if any(not isinstance(label, str) or not label for label in labels):
            raise ValueError(f"labels must be non-empty strings: {labels}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be unique: {labels}")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r}; expected one of {self.labels}") from None


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    gold_label: str | None = None

    @cached_property
    def words(self) -> tuple[str, ...]:
        return tuple(tokenize(self.text))


@dataclass(frozen=True)
class Prediction:
    label_set: LabelSet
    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != len(self.label_set):
            raise ValueError(f"expected {len(self.label_set)} probabilities, got {len(probs)}")
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise ValueError(f"probabilities must lie in [0, 1]: {probs}")
        if abs(math.fsum(probs) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1, got {math.fsum(probs)}")

    @cached_property
    def predicted_index(self) -> int:
        # max() keeps the first maximal element, i.e. the lowest label index
        return max(range(len(self.probs)), key=self.probs.__getitem__)

    @property
    def predicted_label(self) -> str:
        return self.label_set.labels[self.predicted_index]

    @property
    def confidence(self) -> float:
        return self.probs[self.predicted_index]

    def prob(self, index: int) -> float:
        return self.probs[index]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.label_set.labels, self.probs))


@dataclass(frozen=True)
class Explanation:
    words: tuple[str, ...]
    scores: tuple[float, ...]
    method: str = "loo"
    queries: int = 0
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        if len(self.scores) != len(self.words):
            raise ValueError(f"{len(self.scores)} scores for {len(self.words)} words")
        if not self.words:
            raise ValueError("cannot explain an empty document")

    @cached_property
    def ranking(self) -> tuple[int, ...]:
        # descending score, leftmost first on ties
        return tuple(sorted(range(len(self.scores)), key=lambda i: (-self.scores[i], i)))

    @property
    def top1_index(self) -> int:
        return self.ranking[0]

    @property
    def top1_token(self) -> str:
        return self.words[self.top1_index]

    @property
    def top1_score(self) -> float:
        return self.scores[self.top1_index]

    def ranked_tokens(self, k: int) -> list[str]:
        """Lowercased tokens of the first min(k, n) ranked positions, in rank order."""
        return [self.words[i].lower() for i in self.ranking[:k]]

    def topk_tokens(self, k: int = 5) -> frozenset[str]:
        return frozenset(self.ranked_tokens(k))


