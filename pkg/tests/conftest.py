import json

import pytest

from config import parse_config
from core import LabelSet
from metrics import STATUS_OK, PredSummary, RunRecord, Top1
from models import ModelHandle, ModelInterface, ModelKind

LABELS = LabelSet(("positive", "negative"))


@pytest.fixture
def labels() -> LabelSet:
    return LABELS


@pytest.fixture
def toy_model():
    def make(lexicon: dict, name: str = "toy", **kwargs) -> ModelHandle:
        return ModelHandle(name=name, kind=ModelKind.BUILTIN_TOY, label_set=LABELS, lexicon=lexicon, **kwargs)
    return make


@pytest.fixture
def interface() -> ModelInterface:
    return ModelInterface()


@pytest.fixture
def make_record():
    """RunRecord factory with controllable flip, label consistency and top-k tokens."""

    def make(i: int = 0, flip: bool = False, consistent: bool = True, original_tokens=("alpha",),
             perturbed_tokens=None, model: str = "m", op_type: str = "word_delete", severity: float = 0.1,
             dataset: str = "d", status: str = STATUS_OK, moved: bool = False) -> RunRecord:
        original_top1 = Top1(0, "Alpha", 0.5)
        perturbed_top1 = Top1(1 if moved else 0, "beta" if flip else "alpha", 0.4)
        return RunRecord(
            model=model,
            case_id=f"{dataset}/{i:06d}~{op_type}@{severity:.2f}",
            op_type=op_type,
            severity=severity,
            status=status,
            original_text="alpha beta gamma",
            perturbed_text="alpha gamma",
            original_pred=PredSummary("positive", 0.9),
            perturbed_pred=PredSummary("positive" if consistent else "negative", 0.8),
            original_top1=original_top1,
            perturbed_top1=perturbed_top1,
            original_topk_tokens=tuple(original_tokens),
            perturbed_topk_tokens=tuple(original_tokens if perturbed_tokens is None else perturbed_tokens),
            query_count=7,
        )

    return make


@pytest.fixture
def write_jsonl(tmp_path):
    def write(rows: list[dict], name: str = "data.jsonl"):
        path = tmp_path / name
        path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
        return path
    return write


@pytest.fixture
def mt_tables(tmp_path):
    forward = tmp_path / "en_de.tsv"
    backward = tmp_path / "de_en.tsv"
    forward.write_text("good\tgut\nfilm\tFilm\nis\tist\nvery\tsehr\n", encoding="utf-8")
    backward.write_text("gut\tfine\nfilm\tmovie\nist\tis\nsehr\tvery\n", encoding="utf-8")
    return forward, backward


@pytest.fixture
def run_config(tmp_path, write_jsonl, mt_tables):
    """Small all-builtin run: a handful of reviews, one toy model, every cell."""

    def make(documents: list[dict] | None = None, **overrides):
        documents = documents or [
            {"id": f"doc{i}", "text": text, "label": label}
            for i, (text, label) in enumerate([
                ("the film is very good and the acting is great", "positive"),
                ("a boring plot with awful dialogue and weak actors", "negative"),
                ("good music but a dull and predictable story", "negative"),
                ("great fun with a superb cast and a clever script", "positive"),
                ("the ending is bad yet the film is quite good", "positive"),
                ("terrible pacing and a very boring final act", "negative"),
            ])
        ]
        dataset = write_jsonl(documents, "reviews.jsonl")
        lexicon = tmp_path / "synonyms.tsv"
        lexicon.write_text("good\tfine,decent\nfilm\tmovie\ngreat\tterrific\nboring\tdull,tiresome\n"
                           "story\ttale\nacting\tperformance\n", encoding="utf-8")
        data = {
            "run_name": "test-run",
            "global_seed": 3,
            "output_dir": str(tmp_path / "runs"),
            "datasets": [{"name": "reviews", "path": str(dataset), "sample_size": len(documents)}],
            "models": [{
                "name": "toy",
                "kind": "builtin_toy",
                "labels": ["positive", "negative"],
                "lexicon": {"good": 1.5, "great": 2.0, "superb": 2.5, "clever": 1.0, "fun": 1.2,
                            "boring": -1.8, "awful": -2.4, "weak": -1.1, "dull": -1.6, "bad": -1.5,
                            "terrible": -2.5, "predictable": -0.9},
                "family": "encoder",
                "scale_b": 0.11,
            }],
            "perturbation": {"lexicon_path": str(lexicon)},
            "mt": {"kind": "dictionary", "forward_table": str(mt_tables[0]), "backward_table": str(mt_tables[1])},
            "bootstrap": {"iterations": 200},
            "concurrency": 3,
        }
        data.update(overrides)
        return parse_config(data)

    return make
