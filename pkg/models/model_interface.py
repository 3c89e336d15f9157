"""Black-box prediction interface.

Every module observes a model only through ``ModelInterface.predict``: text in,
probability distribution over the model's label set out. Three adapters sit
behind it: a classifier endpoint (POST /predict), a completion endpoint scored
over label continuations (POST /score_labels) and the builtin toy model.
"""
import logging
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

import requests
from pydantic import BaseModel, ValidationError
from requests.adapters import HTTPAdapter, Retry

from core import EmptyQueryError, LabelSet, Prediction
from core.errors import ConfigurationError, ProtocolError, TransportError

from .cache import QueryCache
from .toy import normalize_lexicon, toy_probs

logger = logging.getLogger(__name__)

PROMPT_SLOT = "{x}"
MAX_RETRIES = 3
BACKOFF_BASE_S = 0.25
RETRY_STATUSES = (429, 500, 502, 503, 504)
RAW_SUM_TOLERANCE = 1e-3


class ModelKind(str, Enum):
    CLASSIFIER_ENDPOINT = "classifier_endpoint"
    COMPLETION_ENDPOINT = "completion_endpoint"
    BUILTIN_TOY = "builtin_toy"


@dataclass(frozen=True)
class ModelHandle:
    name: str
    kind: ModelKind
    label_set: LabelSet
    per_call_cost: float = 1.0
    base_url: str | None = None
    prompt_template: str | None = None
    # label -> canonical answer string, completion endpoints only
    label_surface_forms: Mapping[str, str] | None = field(default=None, compare=False, hash=False)
    lexicon: Mapping[str, float] | None = field(default=None, compare=False, hash=False)
    auth_token: str | None = field(default=None, repr=False, compare=False, hash=False)
    family: str | None = None
    scale_b: float | None = None
    timeout_s: float = 30.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if not self.name:
            raise ConfigurationError("a model needs a name")
        if not self.per_call_cost > 0:
            raise ConfigurationError(f"model {self.name}: per_call_cost must be > 0, got {self.per_call_cost}")
        if self.kind is ModelKind.COMPLETION_ENDPOINT:
            if not self.prompt_template:
                raise ConfigurationError(f"model {self.name}: completion endpoints need a prompt_template")
            if PROMPT_SLOT not in self.prompt_template:
                raise ConfigurationError(f"model {self.name}: prompt_template lacks the {PROMPT_SLOT} slot")
            forms = dict(self.label_surface_forms or {})
            missing = [label for label in self.label_set if not forms.get(label)]
            if missing:
                raise ConfigurationError(f"model {self.name}: no label surface form for {missing}")
            object.__setattr__(self, "label_surface_forms", {label: forms[label] for label in self.label_set})
        if self.kind is ModelKind.BUILTIN_TOY:
            if self.lexicon is None:
                raise ConfigurationError(f"model {self.name}: builtin_toy models need a lexicon")
            if len(self.label_set) != 2:
                raise ConfigurationError(f"model {self.name}: builtin_toy models need exactly 2 labels")
            object.__setattr__(self, "lexicon", normalize_lexicon(self.lexicon))
        elif not self.base_url:
            raise ConfigurationError(f"model {self.name}: endpoint models need a base_url")


def render_prompt(model: ModelHandle, instance_text: str) -> str:
    """Place the instance text in the template's single slot.

    Only the slot changes, so original, perturbed and occluded variants of an
    instance share byte-identical scaffolding.
    """
    if model.kind is not ModelKind.COMPLETION_ENDPOINT:
        raise ConfigurationError(f"model {model.name} is not a completion endpoint")
    template = model.prompt_template or ""
    if PROMPT_SLOT not in template:
        raise ConfigurationError(f"model {model.name}: prompt_template lacks the {PROMPT_SLOT} slot")
    return template.replace(PROMPT_SLOT, instance_text, 1)


def extract_label_probs_from_completion(
    raw_token_logprobs: Mapping[str, float | Sequence[float]],
    label_surface_forms: Mapping[str, str],
) -> dict[str, float]:
    """Renormalize candidate sequence log-probabilities over the label set.

    A candidate's score is exp(sum of its token log-probabilities); mass the
    model puts outside the label set is discarded.
    """
    sequence_logprobs = {}
    for label, form in label_surface_forms.items():
        if form not in raw_token_logprobs:
            raise ProtocolError(f"endpoint did not score surface form {form!r} for label {label!r}")
        value = raw_token_logprobs[form]
        total = math.fsum(value) if isinstance(value, (list, tuple)) else float(value)
        if math.isnan(total) or total == math.inf:
            raise ProtocolError(f"non-finite log-probability {total} for label {label!r}")
        sequence_logprobs[label] = total

    top = max(sequence_logprobs.values())
    if top == -math.inf:
        raise ProtocolError("every label has zero probability")
    weights = {label: math.exp(lp - top) for label, lp in sequence_logprobs.items()}
    norm = math.fsum(weights.values())
    return {label: w / norm for label, w in weights.items()}


class ClassifierResponse(BaseModel):
    probs: dict[str, float]


class CompletionResponse(BaseModel):
    logprobs: dict[str, float | list[float]]


def retry_policy() -> Retry:
    """Transient failures (connection errors, timeouts, 429, 5xx) retried with exponential backoff."""
    return Retry(
        total=MAX_RETRIES,
        backoff_factor=BACKOFF_BASE_S,
        status_forcelist=RETRY_STATUSES,
        # model queries are pure, so POST is safe to repeat
        allowed_methods=frozenset({"POST"}),
        raise_on_status=False,
    )


def build_http_session() -> requests.Session:
    session = requests.Session()
    adapter = HTTPAdapter(max_retries=retry_policy())
    session.mount("http://", adapter)
    session.mount("https://", adapter)
    return session


class EndpointSession:
    """POSTs JSON with a bearer token.

    The default session retries through a mounted ``HTTPAdapter``; an injected
    session (a test client) is used as given and gets a single attempt.
    """

    def __init__(self, base_url: str, token: str | None = None, timeout_s: float = 30.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.token = token
        self.timeout_s = timeout_s
        self.session = session if session is not None else build_http_session()
        self.max_attempts = 1 if session is not None else MAX_RETRIES + 1

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        return headers

    def post_json(self, path: str, payload: dict) -> dict:
        url = f"{self.base_url}{path}"
        try:
            resp = self.session.post(url, json=payload, headers=self._headers(), timeout=self.timeout_s)
        except requests.exceptions.RequestException as e:
            logger.warning(f"POST {url} failed: {e}")
            raise TransportError(f"{url} unreachable: {e}", attempts=self.max_attempts, cause=e) from e
        if resp.status_code in RETRY_STATUSES:
            raise TransportError(f"{url} answered {resp.status_code}", attempts=self.max_attempts)
        if not 200 <= resp.status_code < 300:
            raise TransportError(f"{url} answered {resp.status_code}")
        try:
            return resp.json()
        except ValueError as e:
            raise ProtocolError(f"{url} returned a non-JSON body: {e}") from e


class ToyAdapter:
    def __init__(self, model: ModelHandle):
        self.model = model

    def query_text(self, text: str) -> str:
        return text

    def score(self, query: str) -> list[float]:
        return list(toy_probs(self.model.lexicon, query))


class ClassifierEndpointAdapter:
    def __init__(self, model: ModelHandle, endpoint: EndpointSession):
        self.model = model
        self.endpoint = endpoint

    def query_text(self, text: str) -> str:
        return text

    def score(self, query: str) -> list[float]:
        data = self.endpoint.post_json("/predict", {"text": query})
        try:
            parsed = ClassifierResponse.model_validate(data)
        except ValidationError as e:
            raise ProtocolError(f"model {self.model.name}: malformed /predict response: {e}") from e
        unknown = set(parsed.probs) - set(self.model.label_set)
        if unknown:
            raise ProtocolError(f"model {self.model.name}: unknown labels in response: {sorted(unknown)}")
        missing = [label for label in self.model.label_set if label not in parsed.probs]
        if missing:
            raise ProtocolError(f"model {self.model.name}: response lacks labels {missing}")
        return [parsed.probs[label] for label in self.model.label_set]


class CompletionEndpointAdapter:
    def __init__(self, model: ModelHandle, endpoint: EndpointSession):
        self.model = model
        self.endpoint = endpoint

    def query_text(self, text: str) -> str:
        return render_prompt(self.model, text)

    def score(self, query: str) -> list[float]:
        forms = self.model.label_surface_forms
        data = self.endpoint.post_json("/score_labels", {"prompt": query, "candidates": list(forms.values())})
        try:
            parsed = CompletionResponse.model_validate(data)
        except ValidationError as e:
            raise ProtocolError(f"model {self.model.name}: malformed /score_labels response: {e}") from e
        probs = extract_label_probs_from_completion(parsed.logprobs, forms)
        return [probs[label] for label in self.model.label_set]


def to_prediction(label_set: LabelSet, values: Sequence[float]) -> Prediction:
    """Normalize raw endpoint probabilities into a Prediction."""
    if any(not math.isfinite(v) or v < 0 for v in values):
        raise ProtocolError(f"invalid probabilities {list(values)}")
    total = math.fsum(values)
    if abs(total - 1.0) > RAW_SUM_TOLERANCE:
        raise ProtocolError(f"distribution sums to {total}, not 1")
    try:
        return Prediction(label_set, tuple(v / total for v in values))
    except ValueError as e:
        raise ProtocolError(str(e)) from e


class ModelInterface:
    """The only channel through which the pipeline observes a model."""

    def __init__(self, cache: QueryCache | None = None, use_cache: bool = True,
                 session_factory: Callable[[ModelHandle], object] | None = None):
        self.cache = cache if cache is not None else QueryCache()
        self.use_cache = use_cache
        self.session_factory = session_factory
        self._adapters: dict[str, object] = {}
        self._lock = threading.Lock()
        logger.debug(f"ModelInterface initialized (cache={'on' if use_cache else 'off'})")

    def _adapter(self, model: ModelHandle):
        with self._lock:
            adapter = self._adapters.get(model.name)
            if adapter is None:
                adapter = self._build_adapter(model)
                self._adapters[model.name] = adapter
            return adapter

    def _build_adapter(self, model: ModelHandle):
        if model.kind is ModelKind.BUILTIN_TOY:
            return ToyAdapter(model)
        session = self.session_factory(model) if self.session_factory else None
        endpoint = EndpointSession(model.base_url, token=model.auth_token, timeout_s=model.timeout_s,
                                   session=session)
        if model.kind is ModelKind.CLASSIFIER_ENDPOINT:
            return ClassifierEndpointAdapter(model, endpoint)
        return CompletionEndpointAdapter(model, endpoint)

    def predict(self, model: ModelHandle, text: str) -> Prediction:
        if not text.strip():
            raise EmptyQueryError(f"model {model.name}: refusing to query an empty text")
        adapter = self._adapter(model)
        query = adapter.query_text(text)
        if self.use_cache:
            cached = self.cache.get(model.name, query)
            if cached is not None:
                return cached
        prediction = to_prediction(model.label_set, adapter.score(query))
        self.cache.record_query(model.name)
        if self.use_cache:
            self.cache.put(model.name, query, prediction)
        return prediction

    def query_count(self, model_name: str) -> int:
        return self.cache.query_count(model_name)
