"""RunRecord: one (model, paired case) evaluation, the atom of every metric.

The in-memory record has exactly the shape persisted to ``records.jsonl`` so
reports can be recomputed from disk alone.
"""
from dataclasses import dataclass, field

from core import Explanation, Prediction

STATUS_OK = "ok"
STATUS_SKIPPED = "skipped"
STATUS_FAILED = "failed"

RECORD_FIELDS = (
    "model",
    "case_id",
    "op_type",
    "severity",
    "status",
    "original_text",
    "perturbed_text",
    "original_pred",
    "perturbed_pred",
    "original_top1",
    "perturbed_top1",
    "original_topk_tokens",
    "perturbed_topk_tokens",
    "query_count",
)


@dataclass(frozen=True)
class PredSummary:
    label: str
    confidence: float

    @classmethod
    def of(cls, prediction: Prediction) -> "PredSummary":
        return cls(prediction.predicted_label, prediction.confidence)


@dataclass(frozen=True)
class Top1:
    index: int
    token: str
    score: float

    @classmethod
    def of(cls, explanation: Explanation) -> "Top1":
        return cls(explanation.top1_index, explanation.top1_token, explanation.top1_score)


@dataclass(frozen=True)
class RunRecord:
    model: str
    case_id: str
    op_type: str
    severity: float
    status: str
    original_text: str
    perturbed_text: str
    original_pred: PredSummary | None = None
    perturbed_pred: PredSummary | None = None
    original_top1: Top1 | None = None
    perturbed_top1: Top1 | None = None
    original_topk_tokens: tuple[str, ...] = ()
    perturbed_topk_tokens: tuple[str, ...] = ()
    query_count: int = 0
    reason: str | None = None
    # sides whose surrogate fit fell back to ridge; persisted to fits.jsonl, not records.jsonl
    ridge_fallback: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_evaluation(cls, model: str, case, original_pred: Prediction, perturbed_pred: Prediction,
                        original_explanation: Explanation, perturbed_explanation: Explanation,
                        topk: int = 5) -> "RunRecord":
        return cls(
            model=model,
            case_id=case.case_id,
            op_type=case.config.op_type,
            severity=case.config.severity,
            status=STATUS_OK,
            original_text=case.original.text,
            perturbed_text=case.perturbed.text,
            original_pred=PredSummary.of(original_pred),
            perturbed_pred=PredSummary.of(perturbed_pred),
            original_top1=Top1.of(original_explanation),
            perturbed_top1=Top1.of(perturbed_explanation),
            original_topk_tokens=tuple(original_explanation.ranked_tokens(topk)),
            perturbed_topk_tokens=tuple(perturbed_explanation.ranked_tokens(topk)),
            query_count=original_explanation.queries + perturbed_explanation.queries,
            ridge_fallback=tuple(
                side for side, explanation in (("original", original_explanation), ("perturbed", perturbed_explanation))
                if explanation.metadata.get("ridge_fallback")
            ),
        )

    @classmethod
    def not_evaluated(cls, model: str, case_id: str, op_type: str, severity: float, status: str, reason: str,
                      original_text: str = "", perturbed_text: str = "") -> "RunRecord":
        return cls(model=model, case_id=case_id, op_type=op_type, severity=severity, status=status,
                   original_text=original_text, perturbed_text=perturbed_text, reason=reason)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def dataset(self) -> str:
        return self.case_id.split("/", 1)[0] if "/" in self.case_id else ""

    @property
    def document_id(self) -> str:
        local = self.case_id.split("/", 1)[1] if "/" in self.case_id else self.case_id
        return local.rsplit("~", 1)[0]

    @property
    def key(self) -> tuple[str, str]:
        return self.model, self.case_id

    def to_dict(self) -> dict:
        status = self.status if self.reason is None else f"{self.status}: {self.reason}"
        return {
            "model": self.model,
            "case_id": self.case_id,
            "op_type": self.op_type,
            "severity": self.severity,
            "status": status,
            "original_text": self.original_text,
            "perturbed_text": self.perturbed_text,
            "original_pred": _pred_dict(self.original_pred),
            "perturbed_pred": _pred_dict(self.perturbed_pred),
            "original_top1": _top1_dict(self.original_top1),
            "perturbed_top1": _top1_dict(self.perturbed_top1),
            "original_topk_tokens": list(self.original_topk_tokens),
            "perturbed_topk_tokens": list(self.perturbed_topk_tokens),
            "query_count": self.query_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        status, _, reason = data["status"].partition(":")
        return cls(
            model=data["model"],
            case_id=data["case_id"],
            op_type=data["op_type"],
            severity=float(data["severity"]),
            status=status.strip(),
            original_text=data.get("original_text", ""),
            perturbed_text=data.get("perturbed_text", ""),
            original_pred=PredSummary(**data["original_pred"]) if data.get("original_pred") else None,
            perturbed_pred=PredSummary(**data["perturbed_pred"]) if data.get("perturbed_pred") else None,
            original_top1=Top1(**data["original_top1"]) if data.get("original_top1") else None,
            perturbed_top1=Top1(**data["perturbed_top1"]) if data.get("perturbed_top1") else None,
            original_topk_tokens=tuple(data.get("original_topk_tokens", ())),
            perturbed_topk_tokens=tuple(data.get("perturbed_topk_tokens", ())),
            query_count=int(data.get("query_count", 0)),
            reason=reason.strip() or None,
        )


def _pred_dict(pred: PredSummary | None) -> dict | None:
    return None if pred is None else {"label": pred.label, "confidence": pred.confidence}


def _top1_dict(top1: Top1 | None) -> dict | None:
    return None if top1 is None else {"index": top1.index, "token": top1.token, "score": top1.score}
