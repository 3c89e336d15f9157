"""Leave-one-out occlusion: Imp(w_i; x) = P(y_hat | x) - P(y_hat | x without w_i)."""
import logging

from core import EMPTY_MARKER, Document, Explanation, detokenize

logger = logging.getLogger(__name__)


def explanation_query_cost(n: int) -> int:
    if n < 1:
        raise ValueError(f"cannot explain a document of {n} words")
    return n + 1


def occlude(words, i: int) -> str:
    return detokenize(words[:i] + words[i + 1:]) or EMPTY_MARKER


def explain_loo(interface, model, document: Document) -> Explanation:
    """Score each word by the drop in the originally predicted class's probability.

    The tracked class is fixed by the full-input prediction, even when an
    occlusion flips the argmax.
    """
    words = document.words
    if not words:
        raise ValueError(f"document {document.id} has no words to explain")
    full = interface.predict(model, document.text)
    target = full.predicted_index
    base = full.prob(target)
    scores = [base - interface.predict(model, occlude(words, i)).prob(target) for i in range(len(words))]
    logger.debug(f"LOO explained {document.id} for {model.name} with {len(words) + 1} queries")
    return Explanation(words, tuple(scores), method="loo", queries=explanation_query_cost(len(words)),
                       metadata={"target_index": target})
