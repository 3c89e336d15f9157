import logging
import threading
from collections import Counter

from core import Prediction

logger = logging.getLogger(__name__)


class QueryCache:
    """(model name, exact query string) -> Prediction.

    Values for a key are always equal, so concurrent inserts of the same key
    are harmless; the lock only keeps the dict and counters consistent.
    """

    def __init__(self):
        self._entries: dict[tuple[str, str], Prediction] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self._queries: Counter[str] = Counter()

    def get(self, model_name: str, query: str) -> Prediction | None:
        with self._lock:
            found = self._entries.get((model_name, query))
            if found is None:
                self.misses += 1
            else:
                self.hits += 1
            return found

    def put(self, model_name: str, query: str, prediction: Prediction) -> None:
        with self._lock:
            self._entries[(model_name, query)] = prediction

    def record_query(self, model_name: str) -> None:
        with self._lock:
            self._queries[model_name] += 1

    def query_count(self, model_name: str) -> int:
        with self._lock:
            return self._queries[model_name]

    def stats(self) -> dict:
        with self._lock:
            return {
                "entries": len(self._entries),
                "hits": self.hits,
                "misses": self.misses,
                "queries": dict(sorted(self._queries.items())),
            }

    def __len__(self) -> int:
        return len(self._entries)
