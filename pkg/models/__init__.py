from .cache import QueryCache
from .model_interface import (
    ModelHandle,
    ModelInterface,
    ModelKind,
    extract_label_probs_from_completion,
    render_prompt,
)
from .provider_utils import build_registry, describe_models
from .toy import load_weight_lexicon, logistic, toy_logit, toy_predict

__all__ = [
    "ModelHandle",
    "ModelInterface",
    "ModelKind",
    "QueryCache",
    "build_registry",
    "describe_models",
    "extract_label_probs_from_completion",
    "load_weight_lexicon",
    "logistic",
    "render_prompt",
    "toy_logit",
    "toy_predict",
]
