from .errors import (
    BackTranslationError,
    ConfigurationError,
    EmptyQueryError,
    IngestionError,
    ProtocolError,
    RobustnessError,
    TransportError,
    UndefinedMetricError,
)
from .seeding import stable_hash
from .text import detokenize, is_content_word, stopwords, strip_edges, tokenize
from .types import Document, Explanation, LabelSet, Prediction

EMPTY_MARKER = "[EMPTY]"

__all__ = [
    "BackTranslationError",
    "ConfigurationError",
    "Document",
    "EMPTY_MARKER",
    "EmptyQueryError",
    "Explanation",
    "IngestionError",
    "LabelSet",
    "Prediction",
    "ProtocolError",
    "RobustnessError",
    "TransportError",
    "UndefinedMetricError",
    "detokenize",
    "is_content_word",
    "stable_hash",
    "stopwords",
    "strip_edges",
    "tokenize",
]
