"""Builds ModelHandles from the registry entries of a run config."""
import logging
import os
from typing import Iterable

from core import LabelSet
from core.errors import ConfigurationError

from .model_interface import ModelHandle, ModelKind
from .toy import load_weight_lexicon

logger = logging.getLogger(__name__)


def resolve_token(env_name: str | None) -> str | None:
    """Bearer token for an endpoint, read from the environment (.env included)."""
    if not env_name:
        return None
    token = os.environ.get(env_name)
    if not token:
        raise ConfigurationError(f"environment variable {env_name} is not set")
    return token


def _toy_lexicon(entry) -> dict[str, float] | None:
    lexicon_path = getattr(entry, "lexicon_path", None)
    if entry.lexicon is None and lexicon_path is not None:
        return load_weight_lexicon(lexicon_path)
    return entry.lexicon


def build_model_handle(entry) -> ModelHandle:
    return ModelHandle(
        name=entry.name,
        kind=ModelKind(entry.kind),
        label_set=LabelSet(tuple(entry.labels)),
        per_call_cost=entry.per_call_cost,
        base_url=entry.base_url,
        prompt_template=entry.prompt_template,
        label_surface_forms=entry.label_surface_forms,
        lexicon=_toy_lexicon(entry),
        auth_token=resolve_token(entry.auth_env),
        family=entry.family,
        scale_b=entry.scale_b,
        timeout_s=entry.timeout_s,
    )


def build_registry(entries: Iterable) -> dict[str, ModelHandle]:
    registry = {}
    for entry in entries:
        if entry.name in registry:
            raise ConfigurationError(f"model {entry.name} is registered twice")
        registry[entry.name] = build_model_handle(entry)
    logger.info(f"Registered models: {list(registry)}")
    return registry


def describe_models(registry: dict[str, ModelHandle]) -> list[dict]:
    return [
        {
            "name": handle.name,
            "kind": handle.kind.value,
            "labels": list(handle.label_set),
            "per_call_cost": handle.per_call_cost,
            "family": handle.family,
            "scale_b": handle.scale_b,
        }
        for handle in registry.values()
    ]
