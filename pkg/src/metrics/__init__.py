from .bootstrap import (
    FLIP_RATE,
    PRED_CONSISTENT_FLIP_RATE,
    PREDICTION_CONSISTENCY,
    TOP5_OVERLAP,
    RatioStatistic,
    nearest_rank,
    paired_bootstrap_ci,
)
from .records import STATUS_FAILED, STATUS_OK, STATUS_SKIPPED, PredSummary, RunRecord, Top1
from .stability import (
    consistent_subset,
    flip_rate,
    flipped,
    label_consistent,
    mean_topk_overlap,
    ok_records,
    position_flipped,
    positional_flip_rate,
    pred_consistent_flip_rate,
    prediction_consistency,
    topk_overlap,
)
from .summary import MetricReport, compare_groups, intervals_overlap, relative_reduction, summarize

__all__ = [
    "FLIP_RATE",
    "PRED_CONSISTENT_FLIP_RATE",
    "PREDICTION_CONSISTENCY",
    "STATUS_FAILED",
    "STATUS_OK",
    "STATUS_SKIPPED",
    "TOP5_OVERLAP",
    "MetricReport",
    "PredSummary",
    "RatioStatistic",
    "RunRecord",
    "Top1",
    "compare_groups",
    "consistent_subset",
    "flip_rate",
    "flipped",
    "intervals_overlap",
    "label_consistent",
    "mean_topk_overlap",
    "nearest_rank",
    "ok_records",
    "paired_bootstrap_ci",
    "position_flipped",
    "positional_flip_rate",
    "pred_consistent_flip_rate",
    "prediction_consistency",
    "relative_reduction",
    "summarize",
    "topk_overlap",
]
