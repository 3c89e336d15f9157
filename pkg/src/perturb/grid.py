"""The (operator, severity) grid and the fixed (original, perturbed) pairing."""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from core import Document, stable_hash
from core.errors import BackTranslationError

from .lexicon import SynonymLexicon
from .operators import (
    SHUFFLE_WINDOW,
    EditResult,
    char_delete,
    char_swap,
    synonym_replace,
    word_delete,
    word_shuffle,
)
from .translate import Translator, back_translate

logger = logging.getLogger(__name__)

OP_TYPES = ("char_swap", "char_delete", "synonym_replace", "word_delete", "word_shuffle", "back_translate")
WORD_LEVEL_OPS = ("synonym_replace", "word_delete", "word_shuffle")
SEVERITIES = (0.05, 0.10, 0.20)


@dataclass(frozen=True)
class PerturbationConfig:
    op_type: str
    severity: float
    seed: int = 0

    def __post_init__(self):
        if self.op_type not in OP_TYPES:
            raise ValueError(f"unknown perturbation {self.op_type!r}; expected one of {OP_TYPES}")
        if self.severity not in SEVERITIES:
            raise ValueError(f"severity {self.severity} is not one of {SEVERITIES}")

    @property
    def cell(self) -> str:
        return f"{self.op_type}@{self.severity:.2f}"


def case_suffix(op_type: str, severity: float) -> str:
    return f"~{op_type}@{severity:.2f}"


def make_case_id(dataset: str, document_id: str, op_type: str, severity: float) -> str:
    perturbed_id = f"{document_id}{case_suffix(op_type, severity)}"
    return f"{dataset}/{perturbed_id}" if dataset else perturbed_id


@dataclass(frozen=True)
class PairedCase:
    original: Document
    perturbed: Document
    config: PerturbationConfig
    dataset: str = ""
    budget: int | None = None
    applied: int = 0
    # back-translation cells after the first share one translation
    replicate: bool = False

    @property
    def case_id(self) -> str:
        return f"{self.dataset}/{self.perturbed.id}" if self.dataset else self.perturbed.id

    @property
    def clamped(self) -> bool:
        """Fewer edits applied than the severity asked for (a synonym shortfall for synonym_replace)."""
        return self.budget is not None and self.applied < self.budget

    def metadata(self) -> dict:
        return {
            "case_id": self.case_id,
            "op_type": self.config.op_type,
            "severity": self.config.severity,
            "budget": self.budget,
            "applied": self.applied,
            "replicate": self.replicate,
        }


@dataclass(frozen=True)
class SkippedCase:
    original: Document
    config: PerturbationConfig
    reason: str
    dataset: str = ""

    @property
    def case_id(self) -> str:
        return make_case_id(self.dataset, self.original.id, self.config.op_type, self.config.severity)


@dataclass
class PerturbationGrid:
    cases: list[PairedCase] = field(default_factory=list)
    skipped: list[SkippedCase] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cases)

    def extend(self, other: "PerturbationGrid") -> None:
        self.cases.extend(other.cases)
        self.skipped.extend(other.skipped)


def grid_cells(operators: Iterable[str] = OP_TYPES, severities: Iterable[float] = SEVERITIES) -> list[tuple[str, float]]:
    return list(product(operators, severities))


def apply_operator(document: Document, config: PerturbationConfig, lexicon: SynonymLexicon,
                   shuffle_window: int = SHUFFLE_WINDOW) -> EditResult:
    op, severity, seed = config.op_type, config.severity, config.seed
    if op == "char_swap":
        return char_swap(document.text, severity, seed)
    if op == "char_delete":
        return char_delete(document.text, severity, seed)
    if op == "synonym_replace":
        return synonym_replace(document.words, severity, seed, lexicon)
    if op == "word_delete":
        return word_delete(document.words, severity, seed)
    if op == "word_shuffle":
        return word_shuffle(document.words, severity, seed, window=shuffle_window)
    raise ValueError(f"{op} is not a local operator")


def build_perturbation_grid(documents: Sequence[Document], configs: Sequence[tuple[str, float]] | None = None,
                            lexicon: SynonymLexicon | None = None, mt_client: Translator | None = None,
                            global_seed: int = 0, dataset: str = "",
                            shuffle_window: int = SHUFFLE_WINDOW) -> PerturbationGrid:
    """Pair every document with every configured cell.

    The per-case seed hashes (global seed, document id, operator, severity), so
    any subset of the grid reproduces independently of iteration order.
    """
    configs = grid_cells() if configs is None else list(configs)
    lexicon = lexicon or SynonymLexicon()
    grid = PerturbationGrid()
    for document in documents:
        translation: str | BackTranslationError | None = None
        for op_type, severity in configs:
            config = PerturbationConfig(op_type, severity, stable_hash(global_seed, document.id, op_type, severity))
            replicate = False
            if op_type == "back_translate":
                if mt_client is None:
                    grid.skipped.append(SkippedCase(document, config, "no MT client configured", dataset))
                    continue
                replicate = translation is not None
                if translation is None:
                    try:
                        translation = back_translate(document.text, mt_client)
                    except BackTranslationError as e:
                        logger.warning(f"Back-translation of {document.id} failed: {e}")
                        translation = e
                if isinstance(translation, BackTranslationError):
                    grid.skipped.append(SkippedCase(document, config, f"back-translation failed: {translation}", dataset))
                    continue
                edit = EditResult(translation, None, 1)
            else:
                edit = apply_operator(document, config, lexicon, shuffle_window)

            if not edit.words:
                grid.skipped.append(SkippedCase(document, config, "perturbation produced an empty text", dataset))
                continue
            perturbed = Document(f"{document.id}{case_suffix(op_type, severity)}", edit.text, document.gold_label)
            grid.cases.append(PairedCase(document, perturbed, config, dataset, edit.budget, edit.applied, replicate))
    logger.info(f"Built {len(grid.cases)} paired cases ({len(grid.skipped)} skipped) from {len(documents)} documents")
    return grid
