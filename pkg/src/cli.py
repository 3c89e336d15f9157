"""Command-line verbs: run, report, perturb, validate, compare."""
import argparse
import json
import logging
import sys

import pandas as pd

from config import load_config
from core.errors import RobustnessError
from report import emit_report

logger = logging.getLogger(__name__)


def _run(args) -> int:
    from run_handler import execute_run

    outcome = execute_run(load_config(args.config))
    print(f"run directory: {outcome.run_dir}")
    print(json.dumps(outcome.counts, indent=2))
    return outcome.exit_code


def _report(args) -> int:
    report = emit_report(args.run_dir)
    print(json.dumps(report["tiers"], indent=2))
    return 0


def _perturb(args) -> int:
    from run_handler import preview_grid

    if not args.preview:
        print("perturb only supports --preview; use 'run' to evaluate models", file=sys.stderr)
        return 2
    frame = preview_grid(load_config(args.config), limit=args.limit)
    with pd.option_context("display.max_colwidth", args.width, "display.width", None):
        print(frame.to_string(index=False))
    return 0


def _validate(args) -> int:
    from run_handler import validate_run_config

    summary = validate_run_config(load_config(args.config))
    print(json.dumps(summary, indent=2))
    return 0


def _compare(args) -> int:
    from run_handler import compare_explainers

    result = compare_explainers(load_config(args.config), model_name=args.model, limit=args.limit)
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="explain-robustness",
                                     description="Stress-test black-box explanations under input perturbations.")
    verbs = parser.add_subparsers(dest="verb", required=True)

    run = verbs.add_parser("run", help="execute (or resume) the full grid and write the report")
    run.add_argument("config")
    run.set_defaults(handler=_run)

    report = verbs.add_parser("report", help="recompute report.json and plotdata/ from a run directory")
    report.add_argument("run_dir")
    report.set_defaults(handler=_report)

    perturb = verbs.add_parser("perturb", help="print paired cases without querying models")
    perturb.add_argument("config")
    perturb.add_argument("--preview", action="store_true")
    perturb.add_argument("--limit", type=int, default=None)
    perturb.add_argument("--width", type=int, default=60)
    perturb.set_defaults(handler=_perturb)

    validate = verbs.add_parser("validate", help="check a config, its datasets, lexicons and credentials")
    validate.add_argument("config")
    validate.set_defaults(handler=_validate)

    compare = verbs.add_parser("compare", help="score the same cases under LOO and the surrogate explainer")
    compare.add_argument("config")
    compare.add_argument("--model", default=None)
    compare.add_argument("--limit", type=int, default=None)
    compare.set_defaults(handler=_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except RobustnessError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return 2
