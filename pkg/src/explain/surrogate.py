"""Sampled-mask linear surrogate (LIME-style) used as a control explainer."""
import logging
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from core import EMPTY_MARKER, Document, Explanation, detokenize

logger = logging.getLogger(__name__)

RIDGE = 1e-6
MAX_EXHAUSTIVE_WORDS = 12
# solver noise would otherwise break exact ties between symmetric words
SCORE_DECIMALS = 10


@dataclass(frozen=True)
class SurrogateParams:
    num_samples: int = 200
    mask_probability: float = 0.5
    kernel_width: float = 0.75
    exhaustive: bool = False

    def __post_init__(self):
        if not 0.0 < self.mask_probability <= 1.0:
            raise ValueError(f"mask_probability must be in (0, 1], got {self.mask_probability}")
        if not self.kernel_width > 0:
            raise ValueError(f"kernel_width must be positive, got {self.kernel_width}")


def sample_masks(n: int, params: SurrogateParams, seed: int) -> np.ndarray:
    if params.exhaustive:
        if n > MAX_EXHAUSTIVE_WORDS:
            raise ValueError(f"exhaustive masks are limited to {MAX_EXHAUSTIVE_WORDS} words, got {n}")
        return np.array(list(product((0, 1), repeat=n)), dtype=int)
    if params.num_samples < n + 2:
        raise ValueError(f"num_samples must be at least n + 2 = {n + 2}, got {params.num_samples}")
    rng = np.random.default_rng(seed)
    drawn = (rng.random((params.num_samples - 1, n)) < params.mask_probability).astype(int)
    return np.vstack([np.ones((1, n), dtype=int), drawn])


def kernel_weights(masks: np.ndarray, kernel_width: float) -> np.ndarray:
    overlap = masks.sum(axis=1) / masks.shape[1]
    if math.isinf(kernel_width):
        return np.ones(len(masks))
    return np.exp(-((1.0 - overlap) ** 2) / kernel_width ** 2)


def fit_weighted_linear(masks: np.ndarray, targets: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, bool]:
    """Weighted least squares with intercept; returns (coefficients without intercept, ridge_used).

    A rank-deficient design is solved as ridge regression through the SVD of the
    weighted design, which keeps the solution in its row space.
    """
    design = np.column_stack([np.ones(len(masks)), masks]).astype(float)
    root = np.sqrt(weights)
    a = design * root[:, None]
    b = targets * root
    if np.linalg.matrix_rank(a) < design.shape[1]:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
        kept = s > s.max() * max(a.shape) * np.finfo(float).eps
        shrink = np.where(kept, s / (s ** 2 + RIDGE), 0.0)
        return (vt.T @ (shrink * (u.T @ b)))[1:], True
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    return coef[1:], False


def explain_surrogate(interface, model, document: Document, params: SurrogateParams | None = None,
                      seed: int = 0) -> Explanation:
    params = params or SurrogateParams()
    words = document.words
    if not words:
        raise ValueError(f"document {document.id} has no words to explain")
    n = len(words)
    full = interface.predict(model, document.text)
    target = full.predicted_index

    masks = sample_masks(n, params, seed)
    targets = []
    for mask in masks:
        if mask.all():
            text = document.text
        else:
            text = detokenize(w for w, keep in zip(words, mask) if keep) or EMPTY_MARKER
        targets.append(interface.predict(model, text).prob(target))

    coef, ridge = fit_weighted_linear(masks, np.array(targets), kernel_weights(masks, params.kernel_width))
    if ridge:
        logger.warning(f"Surrogate for {document.id} on {model.name}: singular design, ridge {RIDGE} applied")
    scores = tuple(float(c) for c in np.round(coef, SCORE_DECIMALS))
    return Explanation(words, scores, method="surrogate", queries=len(masks),
                       metadata={"target_index": target, "ridge_fallback": ridge})
