import time

import numpy as np
import pytest

from core.errors import UndefinedMetricError
from metrics import (
    FLIP_RATE,
    PRED_CONSISTENT_FLIP_RATE,
    PREDICTION_CONSISTENCY,
    flip_rate,
    nearest_rank,
    paired_bootstrap_ci,
)


def _bernoulli_records(make_record, rng: np.random.Generator, n: int, p: float):
    return [make_record(i=i, flip=bool(flag)) for i, flag in enumerate(rng.random(n) < p)]


class TestDegenerateIntervals:
    def test_no_flips(self, make_record):
        records = [make_record(i=i) for i in range(30)]
        assert paired_bootstrap_ci(records, FLIP_RATE, iterations=1000) == (0.0, 0.0)

    def test_all_flips(self, make_record):
        records = [make_record(i=i, flip=True) for i in range(30)]
        assert paired_bootstrap_ci(records, FLIP_RATE, iterations=1000) == (1.0, 1.0)

    def test_constant_consistency(self, make_record):
        records = [make_record(i=i, flip=i % 2 == 0) for i in range(30)]
        assert paired_bootstrap_ci(records, PREDICTION_CONSISTENCY, iterations=500) == (1.0, 1.0)


class TestCoverage:
    def test_bernoulli_coverage_of_the_95_percent_interval(self, make_record):
        started = time.perf_counter()
        rng = np.random.default_rng(2024)
        covered = 0
        for trial in range(500):
            records = _bernoulli_records(make_record, rng, 200, 0.3)
            lower, upper = paired_bootstrap_ci(records, FLIP_RATE, iterations=10_000, seed=trial)
            covered += lower <= 0.3 <= upper
        assert 0.93 <= covered / 500 <= 0.97
        assert time.perf_counter() - started < 60

    def test_interval_narrows_as_the_sample_grows(self, make_record):
        rng = np.random.default_rng(99)
        widths = []
        for n in (50, 200, 800):
            lower, upper = paired_bootstrap_ci(_bernoulli_records(make_record, rng, n, 0.3), iterations=2000, seed=n)
            widths.append(upper - lower)
        assert widths[0] > widths[1] > widths[2] > 0


class TestPairedBootstrap:
    def test_is_seeded(self, make_record):
        records = _bernoulli_records(make_record, np.random.default_rng(1), 80, 0.4)
        assert paired_bootstrap_ci(records, seed=7, iterations=500) == paired_bootstrap_ci(records, seed=7, iterations=500)

    def test_narrower_level_gives_a_narrower_interval(self, make_record):
        records = _bernoulli_records(make_record, np.random.default_rng(2), 120, 0.3)
        wide = paired_bootstrap_ci(records, iterations=2000, level=0.95)
        narrow = paired_bootstrap_ci(records, iterations=2000, level=0.5)
        assert wide[0] <= narrow[0] <= narrow[1] <= wide[1]

    def test_plain_callables_are_accepted(self, make_record):
        records = _bernoulli_records(make_record, np.random.default_rng(3), 60, 0.5)
        lower, upper = paired_bootstrap_ci(records, lambda sample: flip_rate(sample), iterations=300, seed=4)
        assert 0.0 <= lower <= upper <= 1.0

    def test_conditioned_statistic_resamples_pairs_together(self, make_record):
        records = ([make_record(i=i, flip=True, consistent=False) for i in range(20)]
                   + [make_record(i=100 + i, consistent=True) for i in range(20)])
        # every consistent case is unflipped, so any resample gives 0
        assert paired_bootstrap_ci(records, PRED_CONSISTENT_FLIP_RATE, iterations=500) == (0.0, 0.0)

    def test_redraws_are_capped_at_ten_times_the_iterations(self, make_record):
        calls = []

        def never_defined(sample):
            calls.append(len(sample))
            raise UndefinedMetricError("never_defined")

        records = [make_record(i=i) for i in range(10)]
        with pytest.raises(UndefinedMetricError):
            paired_bootstrap_ci(records, never_defined, iterations=50)
        assert len(calls) == 10 * 50 + 1

    def test_conditioned_rate_without_consistent_cases_gives_up(self, make_record):
        records = [make_record(i=i, flip=i % 2 == 0, consistent=False) for i in range(20)]
        with pytest.raises(UndefinedMetricError):
            paired_bootstrap_ci(records, PRED_CONSISTENT_FLIP_RATE, iterations=200)

    def test_mostly_undefined_statistic_still_fills_every_replicate(self, make_record):
        records = [make_record(i=i, flip=i == 0) for i in range(5)]

        def defined_when_first_draw_is_record_zero(sample):
            # the first resampled slot holds record 0 about one time in five
            if sample[0].case_id != records[0].case_id:
                raise UndefinedMetricError("first_draw")
            return flip_rate(sample)

        lower, upper = paired_bootstrap_ci(records, defined_when_first_draw_is_record_zero, iterations=200, seed=8)
        assert 0.2 <= lower <= upper <= 1.0

    def test_only_ok_records_are_resampled(self, make_record):
        records = [make_record(i=0, flip=True), make_record(i=1, flip=True),
                   make_record(i=2, status="failed")]
        assert paired_bootstrap_ci(records, iterations=100) == (1.0, 1.0)

    def test_rejects_tiny_samples_and_bad_levels(self, make_record):
        with pytest.raises(ValueError):
            paired_bootstrap_ci([make_record()])
        with pytest.raises(ValueError):
            paired_bootstrap_ci([make_record(i=0), make_record(i=1)], level=1.0)


class TestNearestRank:
    def test_percentile_indices(self):
        values = list(range(1, 101))
        assert nearest_rank(values, 0.025) == 3
        assert nearest_rank(values, 0.975) == 98
        assert nearest_rank(values, 0.0) == 1
        assert nearest_rank(values, 1.0) == 100

    def test_float_noise_does_not_shift_the_rank(self):
        values = list(range(1, 10_001))
        assert nearest_rank(values, 0.025) == 250
        assert nearest_rank(values, 0.975) == 9750
