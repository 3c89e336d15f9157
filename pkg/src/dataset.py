"""Dataset ingestion (JSON-lines or two-column CSV) and seeded sampling."""
import json
import logging
import random
from pathlib import Path
from typing import Sequence

import pandas as pd

from core import Document, stable_hash
from core.errors import ConfigurationError, IngestionError

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "csv")


def _default_id(position: int) -> str:
    return f"{position:06d}"


def _read_jsonl(path: Path) -> list[Document]:
    documents = []
    with open(path, "r", encoding="utf-8") as f:
        for position, line in enumerate(f):
            line_number = position + 1
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise IngestionError(f"{path}: unparseable JSON ({e.msg})", line_number) from e
            if not isinstance(row, dict) or not isinstance(row.get("text"), str):
                raise IngestionError(f"{path}: expected an object with a string 'text' field", line_number)
            doc_id = row.get("id")
            label = row.get("label")
            documents.append(Document(
                id=_default_id(position) if doc_id is None else str(doc_id),
                text=row["text"],
                gold_label=None if label is None else str(label),
            ))
    return documents


def _read_csv(path: Path, delimiter: str) -> list[Document]:
    try:
        frame = pd.read_csv(path, sep=delimiter, dtype=str, keep_default_na=False, engine="c")
    except pd.errors.ParserError as e:
        # the parser message names the offending line
        raise IngestionError(f"{path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise IngestionError(f"{path}: no header row") from e
    if frame.shape[1] != 2:
        raise IngestionError(f"{path}: expected 2 columns (text, label), found {frame.shape[1]}", 1)
    columns = [str(c).strip().lower() for c in frame.columns]
    text_col, label_col = (frame.columns[columns.index("text")], frame.columns[columns.index("label")]) \
        if {"text", "label"} <= set(columns) else (frame.columns[0], frame.columns[1])
    return [
        Document(id=_default_id(position), text=row[text_col], gold_label=row[label_col] or None)
        for position, row in enumerate(frame.to_dict("records"))
    ]


def ingest_dataset(path: str | Path, format: str = "jsonl", delimiter: str = ",") -> list[Document]:
    path = Path(path)
    if format not in FORMATS:
        raise ConfigurationError(f"unsupported dataset format {format!r}; expected one of {FORMATS}")
    if not path.exists():
        raise IngestionError(f"dataset file {path} does not exist")

    documents = _read_jsonl(path) if format == "jsonl" else _read_csv(path, delimiter)

    seen: set[str] = set()
    for document in documents:
        if document.id in seen:
            raise IngestionError(f"{path}: duplicate document id {document.id!r}")
        seen.add(document.id)

    admitted = [d for d in documents if d.words]
    dropped = len(documents) - len(admitted)
    if dropped:
        logger.warning(f"Dropped {dropped} empty document(s) from {path}")
    logger.info(f"Ingested {len(admitted)} documents from {path}")
    return admitted


def sample_documents(documents: Sequence[Document], sample_size: int, global_seed: int) -> list[Document]:
    """Seeded uniform sample without replacement, returned in id order.

    The draw runs over the id-sorted population, so the input order never
    affects which documents are picked.
    """
    if sample_size > len(documents):
        raise ConfigurationError(f"sample_size {sample_size} exceeds the {len(documents)} admitted documents")
    if sample_size < 1:
        raise ConfigurationError(f"sample_size must be positive, got {sample_size}")
    population = sorted(documents, key=lambda d: d.id)
    rng = random.Random(stable_hash(global_seed, "sample", sample_size))
    picked = rng.sample(population, sample_size)
    return sorted(picked, key=lambda d: d.id)
