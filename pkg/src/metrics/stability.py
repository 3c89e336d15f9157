"""Flip rate, top-k overlap and prediction consistency over RunRecords.

Tokens are compared as lowercased strings, never by position: deletion,
shuffling and back-translation move words around, so only the string is
comparable across the two sides of a pair.
"""
from typing import Iterable, Sequence

from core.errors import UndefinedMetricError

from .records import RunRecord


def ok_records(records: Iterable[RunRecord]) -> list[RunRecord]:
    return [r for r in records if r.ok]


def _require_ok(record: RunRecord) -> None:
    if not record.ok:
        raise ValueError(f"record {record.case_id} has status {record.status!r}; metrics need 'ok'")


def flipped(record: RunRecord) -> bool:
    _require_ok(record)
    return record.original_top1.token.lower() != record.perturbed_top1.token.lower()


def position_flipped(record: RunRecord) -> bool:
    _require_ok(record)
    return record.original_top1.index != record.perturbed_top1.index


def label_consistent(record: RunRecord) -> bool:
    _require_ok(record)
    return record.original_pred.label == record.perturbed_pred.label


def _rate(records: Sequence[RunRecord], indicator, metric: str, grouping: str) -> float:
    ok = ok_records(records)
    if not ok:
        raise UndefinedMetricError(metric, grouping)
    return sum(1 for r in ok if indicator(r)) / len(ok)


def flip_rate(records: Sequence[RunRecord], grouping: str = "all records") -> float:
    return _rate(records, flipped, "flip_rate", grouping)


def positional_flip_rate(records: Sequence[RunRecord], grouping: str = "all records") -> float:
    return _rate(records, position_flipped, "positional_flip_rate", grouping)


def prediction_consistency(records: Sequence[RunRecord], grouping: str = "all records") -> float:
    return _rate(records, label_consistent, "prediction_consistency", grouping)


def consistent_subset(records: Sequence[RunRecord]) -> list[RunRecord]:
    return [r for r in ok_records(records) if label_consistent(r)]


def pred_consistent_flip_rate(records: Sequence[RunRecord], grouping: str = "all records") -> float:
    subset = consistent_subset(records)
    if not subset:
        raise UndefinedMetricError("pred_consistent_flip_rate", grouping)
    return flip_rate(subset, grouping)


def topk_overlap(record: RunRecord, k: int = 5) -> float:
    """Jaccard similarity of the two top-k token sets; 1.0 when both are empty."""
    _require_ok(record)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    a = set(record.original_topk_tokens[:k])
    b = set(record.perturbed_topk_tokens[:k])
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def mean_topk_overlap(records: Sequence[RunRecord], k: int = 5, grouping: str = "all records") -> float:
    ok = ok_records(records)
    if not ok:
        raise UndefinedMetricError("topk_overlap", grouping)
    return sum(topk_overlap(r, k) for r in ok) / len(ok)
