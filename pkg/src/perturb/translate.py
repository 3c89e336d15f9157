"""Machine-translation clients for back-translation (en -> de -> en)."""
import logging
from pathlib import Path
from typing import Mapping, Protocol

from pydantic import BaseModel, ValidationError

from core import detokenize, tokenize
from core.errors import BackTranslationError, ConfigurationError, ProtocolError, TransportError
from models.model_interface import EndpointSession

logger = logging.getLogger(__name__)


class Translator(Protocol):
    def translate(self, text: str, source: str, target: str) -> str: ...


class IdentityTranslator:
    def translate(self, text: str, source: str, target: str) -> str:
        return text


class DictionaryTranslator:
    """Word-by-word test double: one table per direction, unknown words pass through."""

    def __init__(self, forward: Mapping[str, str], backward: Mapping[str, str], source: str = "en", pivot: str = "de"):
        self.tables = {
            (source, pivot): {k.lower(): v for k, v in forward.items()},
            (pivot, source): {k.lower(): v for k, v in backward.items()},
        }

    def translate(self, text: str, source: str, target: str) -> str:
        table = self.tables.get((source, target))
        if table is None:
            raise BackTranslationError(f"no dictionary for {source}->{target}")
        return detokenize(table.get(word.lower(), word) for word in tokenize(text))


class TranslationResponse(BaseModel):
    text: str


class HttpTranslator:
    def __init__(self, base_url: str, token: str | None = None, timeout_s: float = 30.0, session=None):
        self.endpoint = EndpointSession(base_url, token=token, timeout_s=timeout_s, session=session)

    def translate(self, text: str, source: str, target: str) -> str:
        data = self.endpoint.post_json("/translate", {"text": text, "source": source, "target": target})
        try:
            return TranslationResponse.model_validate(data).text
        except ValidationError as e:
            raise ProtocolError(f"malformed /translate response: {e}") from e


def load_translation_table(path: str | Path) -> dict[str, str]:
    table = {}
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ConfigurationError(f"{path}:{number}: expected 'source<TAB>target'")
            source, target = line.split("\t", 1)
            table[source.strip()] = target.strip()
    return table


def back_translate(text: str, mt_client: Translator, source: str = "en", pivot: str = "de") -> str:
    try:
        forward = mt_client.translate(text, source, pivot)
        if not forward.strip():
            raise BackTranslationError(f"{source}->{pivot} translation came back empty")
        result = mt_client.translate(forward, pivot, source)
    except (TransportError, ProtocolError) as e:
        raise BackTranslationError(f"translation endpoint failed: {e}") from e
    if not result.strip():
        raise BackTranslationError(f"{pivot}->{source} translation came back empty")
    return result
