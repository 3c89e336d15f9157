"""Report emission: every grouped MetricReport plus cost, tiers and plot tables.

Everything here is a pure function of the persisted records and config echo,
so re-emitting from the same run directory is byte-identical.
"""
import logging
from collections import defaultdict
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from core import tokenize
from core.errors import UndefinedMetricError
from cost import DEFAULT_THRESHOLDS, CostProfile, assign_tier
from metrics import STATUS_FAILED, STATUS_OK, STATUS_SKIPPED, MetricReport, RunRecord, compare_groups, ok_records, summarize
from storage import RunStore

logger = logging.getLogger(__name__)

GROUPINGS = (
    ("model", "dataset", "op_type", "severity"),
    ("model", "dataset", "op_type"),
    ("model", "dataset"),
    ("model", "op_type", "severity"),
    ("model", "op_type"),
    ("model",),
)


def group_records(records: Iterable[RunRecord], fields: Sequence[str]) -> dict[tuple, list[RunRecord]]:
    groups: dict[tuple, list[RunRecord]] = defaultdict(list)
    for record in records:
        groups[tuple(getattr(record, f) for f in fields)].append(record)
    return dict(sorted(groups.items()))


def _settings(echo: dict) -> dict:
    bootstrap = echo.get("bootstrap") or {}
    return {
        "iterations": int(bootstrap.get("iterations", 10_000)),
        "level": float(bootstrap.get("level", 0.95)),
        "seed": int(echo.get("global_seed", 0)),
        "k": int((echo.get("explainer") or {}).get("topk", 5)),
    }


def metric_reports(ok: Sequence[RunRecord], settings: dict) -> dict[tuple, MetricReport]:
    reports = {}
    for fields in GROUPINGS:
        for values, group in group_records(ok, fields).items():
            reports[(fields, values)] = summarize(group, dict(zip(fields, values)), **settings)
    return reports


def mean_word_count(records: Iterable[RunRecord]) -> float:
    """Mean word count over the distinct original documents behind the records."""
    words = {r.document_id: len(tokenize(r.original_text)) for r in records}
    return sum(words.values()) / len(words)


def cost_profiles(ok: Sequence[RunRecord], models: dict) -> list[dict]:
    profiles = []
    for (model, dataset), group in group_records(ok, ("model", "dataset")).items():
        per_call_cost = float((models.get(model) or {}).get("per_call_cost", 1.0))
        profile = CostProfile(model, mean_word_count(group), per_call_cost)
        profiles.append({"dataset": dataset, **profile.to_dict()})
    return profiles


def tier_assignments(reports: dict[tuple, MetricReport], thresholds) -> dict[str, dict]:
    return {
        values[0]: assign_tier(report.flip_rate, thresholds).to_dict()
        for (fields, values), report in reports.items()
        if fields == ("model",)
    }


def family_comparisons(ok: Sequence[RunRecord], models: dict, settings: dict, dataset: str | None = None) -> list[dict]:
    """Pairwise family comparisons, pooled or within one dataset."""
    families: dict[str, list[RunRecord]] = defaultdict(list)
    for record in ok:
        family = (models.get(record.model) or {}).get("family")
        if family:
            families[family].append(record)
    scope = {} if dataset is None else {"dataset": dataset}
    reports = {family: summarize(group, {"family": family, **scope}, **settings)
               for family, group in sorted(families.items())}
    comparisons = []
    for a, b in combinations(reports.values(), 2):
        baseline, improved = (a, b) if a.flip_rate >= b.flip_rate else (b, a)
        comparisons.append(compare_groups(baseline, improved))
    return comparisons


def scale_comparisons(reports: dict[tuple, MetricReport], models: dict) -> list[dict]:
    """Smallest against largest model within each family, with the full scale trend."""
    by_family: dict[str, list[tuple[float, MetricReport]]] = defaultdict(list)
    for (fields, values), report in reports.items():
        meta = models.get(values[0]) or {}
        if fields == ("model",) and meta.get("family") and meta.get("scale_b") is not None:
            by_family[meta["family"]].append((float(meta["scale_b"]), report))
    comparisons = []
    for family, entries in sorted(by_family.items()):
        entries.sort(key=lambda e: (e[0], e[1].key["model"]))
        if len({scale for scale, _ in entries}) < 2:
            continue
        comparison = compare_groups(entries[0][1], entries[-1][1])
        comparison["family"] = family
        comparison["trend"] = [
            {"model": r.key["model"], "scale_b": scale, "flip_rate": r.flip_rate} for scale, r in entries
        ]
        comparisons.append(comparison)
    return comparisons


def accounting(records: Sequence[RunRecord]) -> dict:
    counts = {status: sum(1 for r in records if r.status == status)
              for status in (STATUS_OK, STATUS_SKIPPED, STATUS_FAILED)}
    counts["total"] = len(records)
    return counts


def perturbation_summary(cases: dict[str, dict]) -> list[dict]:
    """Requested against applied edits per (dataset, op_type, severity) cell."""
    cells: dict[tuple, list[dict]] = defaultdict(list)
    for case_id, row in cases.items():
        dataset = case_id.split("/", 1)[0] if "/" in case_id else ""
        cells[(dataset, row["op_type"], row["severity"])].append(row)
    summary = []
    for (dataset, op_type, severity), rows in sorted(cells.items()):
        short = [row for row in rows if row["budget"] is not None and row["applied"] < row["budget"]]
        summary.append({
            "dataset": dataset,
            "op_type": op_type,
            "severity": severity,
            "cases": len(rows),
            "budget": sum(row["budget"] or 0 for row in rows),
            "applied": sum(row["applied"] for row in rows),
            "shortfall_cases": len(short),
            "shortfall_edits": sum(row["budget"] - row["applied"] for row in short),
            "replicate_cases": sum(1 for row in rows if row["replicate"]),
        })
    return summary


def ridge_fallbacks(ok: Sequence[RunRecord], fits: dict[tuple[str, str], tuple[str, ...]]) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    for record in ok:
        if fits.get(record.key):
            counts[record.model] += 1
    return dict(sorted(counts.items()))


def _notes(reports: dict[tuple, MetricReport], settings: dict, ridge: dict[str, int]) -> list[str]:
    notes = [
        "flips compare top-1 tokens as lowercased strings; positional_flip_rate compares word indices instead",
        "character budgets are floor(severity * C) with C counting non-whitespace characters only",
        f"intervals are {settings['level']:.0%} percentile bootstrap intervals over {settings['iterations']} "
        "resamples of whole records, percentiles taken by nearest rank",
        "back_translate severity cells reuse one translation per document and are replicates",
        "shortfall counts edits a severity asked for that no valid position allowed: missing synonyms "
        "for synonym_replace, clamping for the other operators",
    ]
    if ridge:
        notes.append(f"{sum(ridge.values())} record(s) used a surrogate fit that fell back to ridge regression")
    undefined = [r.key for r in reports.values() if r.pred_consistent_flip_rate is None]
    if undefined:
        notes.append(f"pred_consistent_flip_rate is undefined (null) in {len(undefined)} grouping(s) "
                     "with no label-consistent cases")
    return notes


def _ci_columns(report: MetricReport) -> dict:
    return {"flip_rate": report.flip_rate, "ci_lower": report.flip_rate_ci[0], "ci_upper": report.flip_rate_ci[1]}


def plot_tables(reports: dict[tuple, MetricReport], profiles: list[dict], tiers: dict, models: dict) -> dict[str, pd.DataFrame]:
    def meta(model: str, key: str):
        return (models.get(model) or {}).get(key)

    def rows(fields: tuple) -> list[MetricReport]:
        return [r for (f, _), r in reports.items() if f == fields]

    by_model_dataset = pd.DataFrame(
        [{**r.key, "family": meta(r.key["model"], "family"), "n": r.n, **_ci_columns(r),
          "top5_overlap": r.top5_overlap, "prediction_consistency": r.prediction_consistency}
         for r in rows(("model", "dataset"))],
        columns=["model", "dataset", "family", "n", "flip_rate", "ci_lower", "ci_upper", "top5_overlap",
                 "prediction_consistency"],
    )
    by_scale = pd.DataFrame(
        [{**r.key, "family": meta(r.key["model"], "family"), "scale_b": meta(r.key["model"], "scale_b"),
          "n": r.n, **_ci_columns(r)} for r in rows(("model",))],
        columns=["model", "family", "scale_b", "n", "flip_rate", "ci_lower", "ci_upper"],
    ).sort_values(["family", "scale_b", "model"], na_position="last", kind="mergesort")
    by_op_type = pd.DataFrame(
        [{**r.key, "n": r.n, **_ci_columns(r), "positional_flip_rate": r.positional_flip_rate}
         for r in rows(("model", "op_type", "severity"))],
        columns=["model", "op_type", "severity", "n", "flip_rate", "ci_lower", "ci_upper", "positional_flip_rate"],
    )
    fr = {(r.key["model"], r.key["dataset"]): r.flip_rate for r in rows(("model", "dataset"))}
    cost_vs_fr = pd.DataFrame(
        [{**p, "flip_rate": fr[(p["model"], p["dataset"])], "tier": tiers[p["model"]]["tier"]} for p in profiles],
        columns=["model", "dataset", "mean_word_count", "per_call_cost", "cost_multiplier", "flip_rate", "tier"],
    )
    return {
        "fr_by_model_dataset": by_model_dataset,
        "fr_by_scale": by_scale,
        "fr_by_op_type": by_op_type,
        "cost_vs_fr": cost_vs_fr,
    }


def build_report(records: Sequence[RunRecord], echo: dict, cases: dict[str, dict] | None = None,
                 fits: dict[tuple[str, str], tuple[str, ...]] | None = None) -> tuple[dict, dict[str, pd.DataFrame]]:
    ok = ok_records(records)
    if not ok:
        raise UndefinedMetricError("report", "a run with no ok records")
    settings = _settings(echo)
    models = {m["name"]: m for m in echo.get("models", [])}
    thresholds = tuple((echo.get("cost") or {}).get("tier_thresholds", DEFAULT_THRESHOLDS))

    reports = metric_reports(ok, settings)
    profiles = cost_profiles(ok, models)
    tiers = tier_assignments(reports, thresholds)
    ridge = ridge_fallbacks(ok, fits or {})
    report = {
        "metric_reports": [r.to_dict() for r in reports.values()],
        "cost_profiles": profiles,
        "tiers": tiers,
        "comparisons": {
            "family": family_comparisons(ok, models, settings),
            "family_by_dataset": [
                comparison
                for (dataset,), group in group_records(ok, ("dataset",)).items()
                for comparison in family_comparisons(group, models, settings, dataset)
            ],
            "scale": scale_comparisons(reports, models),
        },
        "accounting": accounting(records),
        "not_evaluated": [
            {"model": r.model, "case_id": r.case_id, "status": r.status, "reason": r.reason}
            for r in records if not r.ok
        ],
        "perturbation": perturbation_summary(cases or {}),
        "ridge_fallbacks": ridge,
        "notes": _notes(reports, settings, ridge),
        # the output location is not part of what was measured
        "config": {key: value for key, value in echo.items() if key != "output_dir"},
    }
    return report, plot_tables(reports, profiles, tiers, models)


def emit_report(run_dir: str | Path) -> dict:
    store = RunStore(run_dir)
    records = store.canonical_records()
    report, tables = build_report(records, store.load_config_echo(), store.load_cases(), store.load_fits())
    store.save_report(report)
    for name, frame in tables.items():
        store.save_table(name, frame)
    logger.info(f"Emitted report with {len(report['metric_reports'])} metric groupings to {store.run_dir}")
    return report
