import random

import pytest

from core.errors import UndefinedMetricError
from metrics import (
    STATUS_FAILED,
    STATUS_SKIPPED,
    RunRecord,
    flip_rate,
    flipped,
    mean_topk_overlap,
    positional_flip_rate,
    pred_consistent_flip_rate,
    prediction_consistency,
    summarize,
    topk_overlap,
)
from metrics.summary import compare_groups, relative_reduction

TOKENS = ["good", "film", "plot", "bad", "acting", "music", "story", "dull"]


def _random_records(rng: random.Random, make_record, size: int) -> list[RunRecord]:
    records = []
    for i in range(size):
        records.append(make_record(
            i=i,
            flip=rng.random() < 0.3,
            consistent=rng.random() < 0.8,
            original_tokens=rng.sample(TOKENS, rng.randint(0, 5)),
            perturbed_tokens=rng.sample(TOKENS, rng.randint(0, 5)),
        ))
    return records


class TestFlipped:
    def test_identical_tops_do_not_flip(self, make_record):
        assert not flipped(make_record())

    def test_different_tokens_flip(self, make_record):
        assert flipped(make_record(flip=True))

    def test_comparison_ignores_case_and_position(self, make_record):
        # original top1 is "Alpha" at index 0, perturbed "alpha" at index 1
        record = make_record(moved=True)
        assert not flipped(record)
        assert positional_flip_rate([record]) == 1.0

    def test_non_ok_records_are_rejected(self, make_record):
        with pytest.raises(ValueError):
            flipped(make_record(status=STATUS_SKIPPED))


class TestRates:
    def test_examples(self, make_record):
        records = [make_record(i=i, flip=(i == 0)) for i in range(4)]
        assert flip_rate(records) == 0.25
        assert prediction_consistency(records) == 1.0
        assert pred_consistent_flip_rate(records) == flip_rate(records)

    def test_conditioned_flip_rate(self, make_record):
        records = (
            [make_record(i=i, flip=i < 3, consistent=True) for i in range(6)]
            + [make_record(i=10 + i, flip=True, consistent=False) for i in range(4)]
        )
        assert pred_consistent_flip_rate(records) == 0.5
        assert prediction_consistency(records) == 0.6

    def test_skipped_and_failed_records_are_excluded(self, make_record):
        records = [make_record(i=0, flip=True), make_record(i=1, status=STATUS_FAILED),
                   make_record(i=2, status=STATUS_SKIPPED)]
        assert flip_rate(records) == 1.0

    def test_empty_sets_are_undefined(self, make_record):
        with pytest.raises(UndefinedMetricError):
            flip_rate([])
        with pytest.raises(UndefinedMetricError):
            pred_consistent_flip_rate([make_record(consistent=False)])

    def test_topk_overlap_examples(self, make_record):
        assert topk_overlap(make_record(original_tokens=TOKENS[:5])) == 1.0
        assert topk_overlap(make_record(original_tokens=TOKENS[:3], perturbed_tokens=TOKENS[3:6])) == 0.0
        record = make_record(original_tokens=TOKENS[:5], perturbed_tokens=TOKENS[:3] + TOKENS[5:7])
        assert topk_overlap(record) == pytest.approx(3 / 7)
        assert topk_overlap(make_record(original_tokens=(), perturbed_tokens=())) == 1.0


class TestAgainstNaiveOracle:
    def test_one_hundred_random_record_sets(self, make_record):
        rng = random.Random(5)
        for _ in range(100):
            records = _random_records(rng, make_record, rng.randint(1, 500))

            naive_flips = [r.original_top1.token.lower() != r.perturbed_top1.token.lower() for r in records]
            naive_consistent = [r.original_pred.label == r.perturbed_pred.label for r in records]
            assert flip_rate(records) == sum(naive_flips) / len(records)
            assert prediction_consistency(records) == sum(naive_consistent) / len(records)

            jaccards = []
            for r in records:
                a, b = set(r.original_topk_tokens), set(r.perturbed_topk_tokens)
                jaccards.append(len(a & b) / len(a | b) if a | b else 1.0)
            assert mean_topk_overlap(records) == sum(jaccards) / len(records)

            kept = [f for f, c in zip(naive_flips, naive_consistent) if c]
            if kept:
                assert pred_consistent_flip_rate(records) == sum(kept) / len(kept)
            else:
                with pytest.raises(UndefinedMetricError):
                    pred_consistent_flip_rate(records)


class TestSummaries:
    def test_zero_flips_give_a_degenerate_interval(self, make_record):
        report = summarize([make_record(i=i) for i in range(50)], {"model": "m"}, iterations=500)
        assert report.flip_rate == 0.0
        assert report.flip_rate_ci == (0.0, 0.0)
        assert report.n == 50

    def test_interval_contains_the_point_estimate(self, make_record):
        records = [make_record(i=i, flip=i % 7 == 0) for i in range(40)]
        report = summarize(records, {"model": "m"}, iterations=500, seed=3)
        assert report.flip_rate_ci[0] <= report.flip_rate <= report.flip_rate_ci[1]

    def test_conditioned_rate_is_null_without_consistent_cases(self, make_record):
        records = [make_record(i=i, consistent=False) for i in range(5)]
        report = summarize(records, {"model": "m"}, iterations=100)
        assert report.pred_consistent_flip_rate is None
        assert report.to_dict()["pred_consistent_flip_rate_ci"] is None

    def test_single_record_has_a_point_interval(self, make_record):
        report = summarize([make_record(flip=True)], {"model": "m"})
        assert report.flip_rate_ci == (1.0, 1.0)

    def test_relative_reduction(self):
        assert relative_reduction(0.47, 0.125) == pytest.approx(0.734, abs=1e-3)
        assert relative_reduction(0.0, 0.0) is None

    def test_compare_groups(self, make_record):
        high = summarize([make_record(i=i, flip=i % 2 == 0) for i in range(40)], {"family": "encoder"}, iterations=300)
        low = summarize([make_record(i=i, flip=False) for i in range(40)], {"family": "decoder"}, iterations=300)
        comparison = compare_groups(high, low)
        assert comparison["relative_reduction"] == 1.0
        assert comparison["intervals_overlap"] is False


class TestRecordSerialization:
    def test_persisted_fields_are_exact(self, make_record):
        data = make_record().to_dict()
        assert list(data) == [
            "model", "case_id", "op_type", "severity", "status", "original_text", "perturbed_text",
            "original_pred", "perturbed_pred", "original_top1", "perturbed_top1",
            "original_topk_tokens", "perturbed_topk_tokens", "query_count",
        ]
        assert data["original_pred"] == {"label": "positive", "confidence": 0.9}
        assert data["original_top1"] == {"index": 0, "token": "Alpha", "score": 0.5}

    def test_reason_travels_inside_status(self):
        record = RunRecord.not_evaluated("m", "d/1~back_translate@0.05", "back_translate", 0.05, STATUS_SKIPPED,
                                         "no MT client configured")
        data = record.to_dict()
        assert data["status"] == "skipped: no MT client configured"
        restored = RunRecord.from_dict(data)
        assert restored.status == STATUS_SKIPPED
        assert restored.reason == "no MT client configured"
        assert restored.dataset == "d"
        assert restored.document_id == "1"
