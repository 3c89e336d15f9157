"""Grouped MetricReports and cross-group comparisons."""
import logging
from dataclasses import asdict, dataclass
from typing import Sequence

from core import stable_hash
from core.errors import UndefinedMetricError

from .bootstrap import FLIP_RATE, PRED_CONSISTENT_FLIP_RATE, paired_bootstrap_ci
from .records import RunRecord
from .stability import (
    consistent_subset,
    flip_rate,
    mean_topk_overlap,
    ok_records,
    positional_flip_rate,
    pred_consistent_flip_rate,
    prediction_consistency,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricReport:
    key: dict
    n: int
    flip_rate: float
    flip_rate_ci: tuple[float, float]
    top5_overlap: float
    prediction_consistency: float
    pred_consistent_flip_rate: float | None
    pred_consistent_flip_rate_ci: tuple[float, float] | None
    pred_consistent_n: int
    positional_flip_rate: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data["flip_rate_ci"] = list(self.flip_rate_ci)
        if self.pred_consistent_flip_rate_ci is not None:
            data["pred_consistent_flip_rate_ci"] = list(self.pred_consistent_flip_rate_ci)
        return data


def describe_key(key: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in key.items()) or "all records"


def _interval(records, statistic, point: float, iterations: int, level: float, seed: int) -> tuple[float, float]:
    if len(records) < 2:
        return point, point
    lower, upper = paired_bootstrap_ci(records, statistic, iterations=iterations, level=level, seed=seed)
    # a percentile interval can exclude the point estimate on skewed resamples
    return min(lower, point), max(upper, point)


def summarize(records: Sequence[RunRecord], key: dict, iterations: int = 10_000, level: float = 0.95,
              seed: int = 0, k: int = 5) -> MetricReport:
    grouping = describe_key(key)
    ok = ok_records(records)
    if not ok:
        raise UndefinedMetricError("metric report", grouping)
    group_seed = stable_hash(seed, "bootstrap", grouping)

    fr = flip_rate(ok, grouping)
    fr_ci = _interval(ok, FLIP_RATE, fr, iterations, level, group_seed)

    subset = consistent_subset(ok)
    pcfr = pcfr_ci = None
    if subset:
        pcfr = pred_consistent_flip_rate(ok, grouping)
        pcfr_ci = _interval(ok, PRED_CONSISTENT_FLIP_RATE, pcfr, iterations, level, group_seed + 1)
    else:
        logger.warning(f"No label-consistent cases for {grouping}; conditioned flip rate undefined")

    return MetricReport(
        key=dict(key),
        n=len(ok),
        flip_rate=fr,
        flip_rate_ci=fr_ci,
        top5_overlap=mean_topk_overlap(ok, k, grouping),
        prediction_consistency=prediction_consistency(ok, grouping),
        pred_consistent_flip_rate=pcfr,
        pred_consistent_flip_rate_ci=pcfr_ci,
        pred_consistent_n=len(subset),
        positional_flip_rate=positional_flip_rate(ok, grouping),
    )


def relative_reduction(baseline: float, improved: float) -> float | None:
    """(baseline - improved) / baseline, e.g. 0.47 -> 0.125 is a 73% reduction."""
    if baseline == 0:
        return None
    return (baseline - improved) / baseline


def intervals_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def compare_groups(baseline: MetricReport, improved: MetricReport) -> dict:
    return {
        "baseline": baseline.key,
        "improved": improved.key,
        "baseline_flip_rate": baseline.flip_rate,
        "improved_flip_rate": improved.flip_rate,
        "relative_reduction": relative_reduction(baseline.flip_rate, improved.flip_rate),
        "intervals_overlap": intervals_overlap(baseline.flip_rate_ci, improved.flip_rate_ci),
    }
