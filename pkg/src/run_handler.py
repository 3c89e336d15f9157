"""Four-stage evaluation pipeline: ingest -> perturb -> evaluate -> report.

The stages are nodes of a langgraph StateGraph. Evaluation fans out over a
bounded pool of worker threads; records are appended by the event loop only,
so the records file has a single writer.
"""
import asyncio
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, TypedDict

import pandas as pd
from langgraph.graph import END, START, StateGraph

from config import ExplainerSettings, MTSettings, RunConfig
from core import Document, stable_hash
from core.errors import ConfigurationError, RobustnessError, TransportError, UndefinedMetricError
from dataset import ingest_dataset, sample_documents
from explain import ExplanationRequest, explain
from metrics import STATUS_FAILED, STATUS_SKIPPED, RunRecord, ok_records, summarize
from models import ModelHandle, ModelInterface, build_registry, describe_models
from models.provider_utils import resolve_token
from perturb import (
    DictionaryTranslator,
    HttpTranslator,
    IdentityTranslator,
    PairedCase,
    PerturbationGrid,
    SynonymLexicon,
    build_perturbation_grid,
    load_lexicon,
)
from perturb.translate import Translator, load_translation_table
from report import accounting, emit_report
from storage import AuditLogger, RunStore

logger = logging.getLogger(__name__)

ACTOR = "Run Handler"


class RunState(TypedDict, total=False):
    config: RunConfig
    store: RunStore
    audit: AuditLogger
    interface: ModelInterface
    registry: dict[str, ModelHandle]
    documents: dict[str, list[Document]]
    grid: PerturbationGrid
    counts: dict
    report: Optional[dict]


@dataclass(frozen=True)
class RunOutcome:
    run_dir: Path
    counts: dict
    report: dict | None

    @property
    def exit_code(self) -> int:
        return 1 if self.counts.get(STATUS_FAILED, 0) or self.report is None else 0


# Stage 1 - Ingestion
def load_documents(config: RunConfig) -> dict[str, list[Document]]:
    documents = {}
    for entry in config.datasets:
        admitted = ingest_dataset(entry.path, entry.format, entry.delimiter)
        documents[entry.name] = sample_documents(admitted, entry.sample_size, config.global_seed)
    return documents


def ingest_node(state: RunState) -> dict:
    documents = load_documents(state["config"])
    state["audit"].log_action(ACTOR, "Ingested", {name: len(docs) for name, docs in documents.items()})
    return {"documents": documents}


# Stage 2 - Perturbation
def build_translator(settings: MTSettings) -> Translator | None:
    if settings.kind == "none":
        return None
    if settings.kind == "identity":
        return IdentityTranslator()
    if settings.kind == "dictionary":
        return DictionaryTranslator(load_translation_table(settings.forward_table),
                                    load_translation_table(settings.backward_table))
    return HttpTranslator(settings.base_url, token=resolve_token(settings.auth_env), timeout_s=settings.timeout_s)


def load_synonyms(config: RunConfig) -> SynonymLexicon:
    if config.perturbation.lexicon_path is not None:
        return load_lexicon(config.perturbation.lexicon_path)
    if "synonym_replace" in config.perturbation.operators:
        logger.warning("No synonym lexicon configured; synonym_replace will leave texts unchanged")
    return SynonymLexicon()


def build_grid(config: RunConfig, documents: dict[str, list[Document]],
               mt_client: Translator | None = None) -> PerturbationGrid:
    lexicon = load_synonyms(config)
    mt_client = mt_client if mt_client is not None else build_translator(config.mt)
    grid = PerturbationGrid()
    for name, docs in documents.items():
        grid.extend(build_perturbation_grid(
            docs,
            config.perturbation.cells(),
            lexicon=lexicon,
            mt_client=mt_client,
            global_seed=config.global_seed,
            dataset=name,
            shuffle_window=config.perturbation.shuffle_window,
        ))
    return grid


def perturb_node(state: RunState) -> dict:
    grid = build_grid(state["config"], state["documents"])
    state["store"].save_cases([case.metadata() for case in grid.cases])
    state["audit"].log_action(ACTOR, "Perturbed", {
        "cases": len(grid.cases),
        "skipped": len(grid.skipped),
        "clamped": sum(1 for case in grid.cases if case.clamped),
    })
    return {"grid": grid}


# Stage 3 - Evaluation
def evaluate_case(interface: ModelInterface, model: ModelHandle, case: PairedCase,
                  explainer: ExplainerSettings, global_seed: int = 0) -> RunRecord:
    params = explainer.surrogate_params() if explainer.method == "surrogate" else None
    original_pred = interface.predict(model, case.original.text)
    perturbed_pred = interface.predict(model, case.perturbed.text)
    # the original side shares one seed across all cells, so its explanation is identical in every pair
    original = explain(interface, ExplanationRequest(model, case.original, explainer.method, params),
                       seed=stable_hash(global_seed, model.name, case.dataset, case.original.id))
    perturbed = explain(interface, ExplanationRequest(model, case.perturbed, explainer.method, params),
                        seed=stable_hash(global_seed, model.name, case.case_id))
    return RunRecord.from_evaluation(model.name, case, original_pred, perturbed_pred, original, perturbed,
                                     topk=explainer.topk)


def _failed(model: ModelHandle, case: PairedCase, reason: str) -> RunRecord:
    return RunRecord.not_evaluated(model.name, case.case_id, case.config.op_type, case.config.severity,
                                   STATUS_FAILED, reason, case.original.text, case.perturbed.text)


async def evaluate_model(model: ModelHandle, cases: list[PairedCase], state: RunState) -> int:
    """Evaluates pending cases for one model; returns the number that failed."""
    config, store, interface = state["config"], state["store"], state["interface"]
    semaphore = asyncio.Semaphore(config.concurrency)
    aborted: list[str] = []

    async def run_case(case: PairedCase) -> RunRecord:
        async with semaphore:
            if aborted:
                record = _failed(model, case, f"model aborted: {aborted[0]}")
            else:
                try:
                    record = await asyncio.to_thread(evaluate_case, interface, model, case, config.explainer,
                                                     config.global_seed)
                except TransportError as e:
                    if not aborted:
                        logger.error(f"Aborting {model.name}: {e}")
                        aborted.append(str(e))
                    record = _failed(model, case, str(e))
                except (RobustnessError, ValueError) as e:
                    logger.warning(f"{model.name} failed on {case.case_id}: {e}")
                    record = _failed(model, case, str(e))
        store.append(record)
        return record

    records = await asyncio.gather(*(run_case(case) for case in cases))
    return sum(1 for r in records if r.status == STATUS_FAILED)


def evaluate_node(state: RunState) -> dict:
    store, grid, audit = state["store"], state["grid"], state["audit"]
    completed = store.completed_keys()
    for model in state["registry"].values():
        for skipped in grid.skipped:
            if (model.name, skipped.case_id) not in completed:
                store.append(RunRecord.not_evaluated(model.name, skipped.case_id, skipped.config.op_type,
                                                     skipped.config.severity, STATUS_SKIPPED, skipped.reason,
                                                     skipped.original.text))
        pending = [case for case in grid.cases if (model.name, case.case_id) not in completed]
        logger.info(f"{model.name}: {len(pending)} pending of {len(grid.cases)} cases")
        failures = asyncio.run(evaluate_model(model, pending, state)) if pending else 0
        audit.log_action(ACTOR, "Evaluated", {
            "model": model.name,
            "evaluated": len(pending),
            "failed": failures,
            "model_queries": state["interface"].query_count(model.name),
        })
    audit.log_action(ACTOR, "Cache", state["interface"].cache.stats())
    return {"counts": accounting(store.canonical_records())}


# Stage 4 - Report
def report_node(state: RunState) -> dict:
    try:
        report = emit_report(state["store"].run_dir)
    except UndefinedMetricError as e:
        logger.error(f"No report for {state['store'].run_dir}: {e}")
        return {"report": None}
    state["audit"].log_action(ACTOR, "Report Stored", {"groupings": len(report["metric_reports"])})
    return {"report": report}


builder = StateGraph(RunState)
builder.add_node("ingest", ingest_node)
builder.add_node("perturb", perturb_node)
builder.add_node("evaluate", evaluate_node)
builder.add_node("report", report_node)
builder.add_edge(START, "ingest")
builder.add_edge("ingest", "perturb")
builder.add_edge("perturb", "evaluate")
builder.add_edge("evaluate", "report")
builder.add_edge("report", END)

graph = builder.compile()


def execute_run(config: RunConfig, interface: ModelInterface | None = None,
                session_factory: Callable | None = None) -> RunOutcome:
    """Runs (or resumes) the grid for every configured model and writes the report."""
    store = RunStore(config.run_dir)
    store.check_config(config.echo())
    audit = AuditLogger(store.audit_path)
    registry = build_registry(config.models)
    interface = interface or ModelInterface(session_factory=session_factory)
    audit.log_action(ACTOR, "Run Started", {"run_dir": str(store.run_dir), "models": describe_models(registry)})

    final = graph.invoke({
        "config": config,
        "store": store,
        "audit": audit,
        "interface": interface,
        "registry": registry,
    })
    counts = final["counts"]
    audit.log_action(ACTOR, "Run Finished", counts)
    logger.info(f"Run {store.run_dir} finished: {counts}")
    return RunOutcome(store.run_dir, counts, final.get("report"))


def preview_grid(config: RunConfig, limit: int | None = None) -> pd.DataFrame:
    """Paired cases as a table, built without querying any model."""
    grid = build_grid(config, load_documents(config))
    rows = [
        {
            "case_id": case.case_id,
            "op_type": case.config.op_type,
            "severity": case.config.severity,
            "budget": case.budget,
            "applied": case.applied,
            "original": case.original.text,
            "perturbed": case.perturbed.text,
        }
        for case in grid.cases
    ]
    rows += [
        {"case_id": s.case_id, "op_type": s.config.op_type, "severity": s.config.severity, "budget": None,
         "applied": 0, "original": s.original.text, "perturbed": f"<skipped: {s.reason}>"}
        for s in grid.skipped
    ]
    frame = pd.DataFrame(rows, columns=["case_id", "op_type", "severity", "budget", "applied", "original", "perturbed"])
    return frame.head(limit) if limit else frame


def validate_run_config(config: RunConfig) -> dict:
    """Resolves every external reference a run needs without querying a model."""
    registry = build_registry(config.models)
    load_synonyms(config)
    build_translator(config.mt)
    documents = load_documents(config)
    return {
        "models": describe_models(registry),
        "datasets": {name: len(docs) for name, docs in documents.items()},
        "cells": len(config.perturbation.cells()),
        "run_dir": str(config.run_dir),
    }


def compare_explainers(config: RunConfig, model_name: str | None = None, limit: int | None = None,
                       interface: ModelInterface | None = None) -> dict:
    """Scores the same paired cases under LOO and the surrogate explainer."""
    registry = build_registry(config.models)
    if model_name is not None and model_name not in registry:
        raise ConfigurationError(f"unknown model {model_name!r}; registered: {list(registry)}")
    model = registry[model_name] if model_name else next(iter(registry.values()))
    interface = interface or ModelInterface()
    cases = build_grid(config, load_documents(config)).cases
    cases = cases[:limit] if limit else cases

    settings = {
        "iterations": config.bootstrap.iterations,
        "level": config.bootstrap.level,
        "seed": config.global_seed,
        "k": config.explainer.topk,
    }
    records: dict[str, list[RunRecord]] = {}
    result = {"model": model.name, "cases": len(cases), "methods": {}}
    for method in ("loo", "surrogate"):
        explainer = config.explainer.model_copy(update={"method": method})
        method_records = []
        for case in cases:
            try:
                method_records.append(evaluate_case(interface, model, case, explainer, config.global_seed))
            except (RobustnessError, ValueError) as e:
                logger.warning(f"{method} failed on {case.case_id}: {e}")
        records[method] = method_records
        report = summarize(method_records, {"model": model.name, "method": method}, **settings)
        ok = ok_records(method_records)
        result["methods"][method] = {
            **report.to_dict(),
            "mean_query_count": sum(r.query_count for r in ok) / len(ok),
        }

    surrogate_by_case = {r.case_id: r for r in records["surrogate"]}
    paired = [(r, surrogate_by_case[r.case_id]) for r in records["loo"] if r.case_id in surrogate_by_case]
    if paired:
        result["top1_agreement"] = sum(
            1 for loo, sur in paired if loo.original_top1.token.lower() == sur.original_top1.token.lower()
        ) / len(paired)
    store = RunStore(config.run_dir)
    store.save_json("explainer_comparison.json", result)
    return result
