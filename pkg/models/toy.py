"""Deterministic in-process stand-in for a served binary classifier.

The logit is a signed bag-of-words sum, so leave-one-out importances have a
closed form: removing word i moves the logit by exactly its weight.
"""
import math
from typing import Mapping

from core import LabelSet, Prediction, tokenize
from core.errors import ConfigurationError


def logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def normalize_lexicon(lexicon: Mapping[str, float]) -> dict[str, float]:
    return {str(word).lower(): float(weight) for word, weight in lexicon.items()}


def toy_logit(lexicon: Mapping[str, float], text: str) -> float:
    logit = 0.0
    for token in tokenize(text):
        logit += lexicon.get(token.lower(), 0.0)
    return logit


def toy_probs(lexicon: Mapping[str, float], text: str) -> tuple[float, float]:
    p = logistic(toy_logit(lexicon, text))
    return p, 1.0 - p


def toy_predict(lexicon: Mapping[str, float], text: str, label_set: LabelSet) -> Prediction:
    if len(label_set) != 2:
        raise ConfigurationError(f"the toy model needs a binary label set, got {label_set.labels}")
    return Prediction(label_set, toy_probs(lexicon, text))


def load_weight_lexicon(path) -> dict[str, float]:
    """Reads ``word<TAB>weight`` lines; blank lines and ``#`` comments are skipped."""
    weights = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            try:
                word, weight = parts[0], float(parts[1])
            except (IndexError, ValueError) as e:
                raise ConfigurationError(f"{path}:{line_number}: expected 'word<TAB>weight', got {line!r}") from e
            weights[word.lower()] = weight
    return weights
