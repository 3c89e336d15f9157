"""Run directory layout: append-only records, config echo, report and plot data.

    <run_dir>/config.json      echo of the run config, checked on resume
    <run_dir>/records.jsonl    one RunRecord per line, appended as cases finish
    <run_dir>/cases.jsonl      budget, applied edits and replicate flag of every paired case
    <run_dir>/fits.jsonl       (model, case) keys whose surrogate fit needed the ridge fallback
    <run_dir>/report.json
    <run_dir>/plotdata/*.csv
    <run_dir>/audit.log
"""
import json
import logging
import threading
from pathlib import Path

import pandas as pd

from core.errors import ConfigurationError, IngestionError
from metrics import STATUS_FAILED, RunRecord

logger = logging.getLogger(__name__)


def dump_json(data) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


class RunStore:
    RECORDS = "records.jsonl"
    CASES = "cases.jsonl"
    FITS = "fits.jsonl"
    CONFIG = "config.json"
    REPORT = "report.json"
    PLOTDATA = "plotdata"
    AUDIT = "audit.log"

    def __init__(self, run_dir: str | Path):
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        for path in (self.records_path, self.fits_path):
            self._drop_partial_tail(path)
        logger.debug(f"RunStore at {self.run_dir}")

    @staticmethod
    def _drop_partial_tail(path: Path) -> None:
        """Cuts a final line left without its newline by a crash mid-write."""
        if not path.exists():
            return
        with open(path, "rb+") as f:
            data = f.read()
            if not data or data.endswith(b"\n"):
                return
            keep = data.rfind(b"\n") + 1
            f.truncate(keep)
        logger.warning(f"Dropped a partial final line from {path}")

    @property
    def records_path(self) -> Path:
        return self.run_dir / self.RECORDS

    @property
    def fits_path(self) -> Path:
        return self.run_dir / self.FITS

    @property
    def audit_path(self) -> Path:
        return self.run_dir / self.AUDIT

    def check_config(self, echo: dict) -> None:
        """Writes the config echo, or refuses to resume a run made with another config."""
        path = self.run_dir / self.CONFIG
        if path.exists():
            with open(path, "r", encoding="utf-8") as f:
                previous = json.load(f)
            if previous != echo:
                raise ConfigurationError(f"{self.run_dir} holds a run with a different config; pick a new run_name")
            return
        path.write_text(dump_json(echo), encoding="utf-8")

    def load_config_echo(self) -> dict:
        path = self.run_dir / self.CONFIG
        if not path.exists():
            raise ConfigurationError(f"{self.run_dir} has no {self.CONFIG}; is it a run directory?")
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)

    def append(self, record: RunRecord) -> None:
        line = json.dumps(record.to_dict(), ensure_ascii=False)
        with self._lock:
            # the fit line goes first so a persisted record never lacks it
            if record.ridge_fallback:
                fit = {"model": record.model, "case_id": record.case_id, "ridge_fallback": list(record.ridge_fallback)}
                _append_line(self.fits_path, json.dumps(fit, ensure_ascii=False))
            _append_line(self.records_path, line)

    def load_records(self) -> list[RunRecord]:
        """All persisted records, the last line winning for a repeated (model, case) key."""
        if not self.records_path.exists():
            return []
        latest: dict[tuple[str, str], RunRecord] = {}
        with open(self.records_path, "r", encoding="utf-8") as f:
            lines = f.readlines()
        for line_number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = RunRecord.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                if line_number == len(lines) and not line.endswith("\n"):
                    logger.warning(f"Ignoring truncated final line of {self.records_path}")
                    continue
                raise IngestionError(f"{self.records_path}: corrupt record ({e})", line_number) from e
            latest[record.key] = record
        return list(latest.values())

    def canonical_records(self) -> list[RunRecord]:
        return sorted(self.load_records(), key=lambda r: r.key)

    def canonical_lines(self) -> list[str]:
        return [json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) for r in self.canonical_records()]

    def completed_keys(self) -> set[tuple[str, str]]:
        # failed cases are retried on resume
        return {r.key for r in self.load_records() if r.status != STATUS_FAILED}

    def save_cases(self, rows: list[dict]) -> Path:
        path = self.run_dir / self.CASES
        ordered = sorted(rows, key=lambda row: row["case_id"])
        path.write_text("".join(json.dumps(row, ensure_ascii=False) + "\n" for row in ordered), encoding="utf-8")
        return path

    def load_cases(self) -> dict[str, dict]:
        path = self.run_dir / self.CASES
        if not path.exists():
            return {}
        with open(path, "r", encoding="utf-8") as f:
            rows = [json.loads(line) for line in f if line.strip()]
        return {row["case_id"]: row for row in rows}

    def load_fits(self) -> dict[tuple[str, str], tuple[str, ...]]:
        if not self.fits_path.exists():
            return {}
        fits = {}
        with open(self.fits_path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    row = json.loads(line)
                    fits[(row["model"], row["case_id"])] = tuple(row["ridge_fallback"])
        return fits

    def save_report(self, report: dict) -> Path:
        path = self.run_dir / self.REPORT
        path.write_text(dump_json(report), encoding="utf-8")
        logger.info(f"Saved report to {path}")
        return path

    def save_table(self, name: str, frame: pd.DataFrame) -> Path:
        directory = self.run_dir / self.PLOTDATA
        directory.mkdir(exist_ok=True)
        path = directory / f"{name}.csv"
        frame.to_csv(path, index=False, lineterminator="\n")
        return path

    def save_json(self, name: str, data: dict) -> Path:
        path = self.run_dir / name
        path.write_text(dump_json(data), encoding="utf-8")
        return path


def _append_line(path: Path, line: str) -> None:
    with open(path, "a", encoding="utf-8") as f:
        f.write(line + "\n")
        f.flush()
