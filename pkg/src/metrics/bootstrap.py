"""Paired bootstrap: resample whole (original, perturbed) records with replacement.

Intervals are percentile intervals with nearest-rank percentiles.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from core.errors import UndefinedMetricError

from .records import RunRecord
from .stability import flipped, label_consistent, ok_records, topk_overlap

logger = logging.getLogger(__name__)

DEFAULT_ITERATIONS = 10_000
DEFAULT_LEVEL = 0.95
REDRAW_FACTOR = 10
# rows of resample indices drawn at once, bounded by total cells
CHUNK_CELLS = 2_000_000


@dataclass(frozen=True)
class RatioStatistic:
    """sum(numerator) / sum(denominator) over a sample; undefined when the denominator sums to 0."""

    name: str
    numerator: Callable[[RunRecord], float]
    denominator: Callable[[RunRecord], float] = lambda record: 1.0

    def columns(self, records: Sequence[RunRecord]) -> tuple[np.ndarray, np.ndarray]:
        num = np.array([float(self.numerator(r)) for r in records])
        den = np.array([float(self.denominator(r)) for r in records])
        return num, den

    def __call__(self, records: Sequence[RunRecord]) -> float:
        num, den = self.columns(records)
        if den.sum() <= 0:
            raise UndefinedMetricError(self.name)
        return float(num.sum() / den.sum())


FLIP_RATE = RatioStatistic("flip_rate", flipped)
PRED_CONSISTENT_FLIP_RATE = RatioStatistic(
    "pred_consistent_flip_rate",
    lambda r: flipped(r) and label_consistent(r),
    label_consistent,
)
PREDICTION_CONSISTENCY = RatioStatistic("prediction_consistency", label_consistent)
TOP5_OVERLAP = RatioStatistic("top5_overlap", lambda r: topk_overlap(r, 5))


def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    rank = max(1, math.ceil(round(q * len(sorted_values), 9)))
    return float(sorted_values[min(rank, len(sorted_values)) - 1])


def _ratio_replicates(statistic: RatioStatistic, records: Sequence[RunRecord], iterations: int,
                      rng: np.random.Generator) -> np.ndarray:
    num, den = statistic.columns(records)
    n = len(records)
    chunk = max(1, CHUNK_CELLS // n)
    kept: list[np.ndarray] = []
    collected = redraws = 0
    while collected < iterations:
        rows = min(chunk, iterations - collected)
        idx = rng.integers(0, n, size=(rows, n))
        den_sum = den[idx].sum(axis=1)
        valid = den_sum > 0
        kept.append(num[idx].sum(axis=1)[valid] / den_sum[valid])
        collected += int(valid.sum())
        redraws += rows - int(valid.sum())
        if redraws > REDRAW_FACTOR * iterations:
            raise UndefinedMetricError(statistic.name, f"bootstrap resamples (gave up after {redraws} redraws)")
    return np.concatenate(kept)


def _callable_replicates(statistic: Callable[[Sequence[RunRecord]], float], records: Sequence[RunRecord],
                         iterations: int, rng: np.random.Generator) -> np.ndarray:
    n = len(records)
    values = []
    redraws = 0
    while len(values) < iterations:
        sample = [records[i] for i in rng.integers(0, n, size=n)]
        try:
            values.append(float(statistic(sample)))
        except UndefinedMetricError:
            redraws += 1
            if redraws > REDRAW_FACTOR * iterations:
                raise
    return np.array(values)


def paired_bootstrap_ci(records: Sequence[RunRecord], statistic: Callable = FLIP_RATE,
                        iterations: int = DEFAULT_ITERATIONS, level: float = DEFAULT_LEVEL,
                        seed: int = 0) -> tuple[float, float]:
    ok = ok_records(records)
    if len(ok) < 2:
        raise ValueError(f"the paired bootstrap needs at least 2 ok records, got {len(ok)}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    rng = np.random.default_rng(seed)
    if isinstance(statistic, RatioStatistic):
        replicates = _ratio_replicates(statistic, ok, iterations, rng)
    else:
        replicates = _callable_replicates(statistic, ok, iterations, rng)
    replicates = np.sort(replicates)
    tail = (1.0 - level) / 2.0
    return nearest_rank(replicates, tail), nearest_rank(replicates, 1.0 - tail)
