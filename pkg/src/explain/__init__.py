from dataclasses import dataclass

from core import Document, Explanation

from .loo import explain_loo, explanation_query_cost, occlude
from .surrogate import SurrogateParams, explain_surrogate

METHODS = ("loo", "surrogate")


@dataclass(frozen=True)
class ExplanationRequest:
    model: object
    document: Document
    method: str = "loo"
    surrogate_params: SurrogateParams | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown explainer {self.method!r}; expected one of {METHODS}")
        if (self.method == "surrogate") != (self.surrogate_params is not None):
            raise ValueError("surrogate_params must be given exactly when method is 'surrogate'")


def explain(interface, request: ExplanationRequest, seed: int = 0) -> Explanation:
    if request.method == "surrogate":
        return explain_surrogate(interface, request.model, request.document, request.surrogate_params, seed)
    return explain_loo(interface, request.model, request.document)


__all__ = [
    "METHODS",
    "ExplanationRequest",
    "SurrogateParams",
    "explain",
    "explain_loo",
    "explain_surrogate",
    "explanation_query_cost",
    "occlude",
]
