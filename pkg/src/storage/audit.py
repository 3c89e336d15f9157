import json
import logging
import threading
from datetime import datetime, timezone
from pathlib import Path

logger = logging.getLogger(__name__)


class AuditLogger:
    """Appends one JSON object per pipeline action to the run's audit log.

    Timestamps live only here, never in records or reports.
    """

    def __init__(self, log_file: str | Path = "audit.log"):
        self.log_file = Path(log_file)
        self._lock = threading.Lock()
        logger.debug(f"AuditLogger writing to {self.log_file}")

    def log_action(self, actor: str, action: str, details: dict | None = None) -> dict:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "actor": actor,
            "action": action,
            "details": details or {},
        }
        with self._lock, open(self.log_file, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False, default=str) + "\n")
        return entry

    def entries(self) -> list[dict]:
        if not self.log_file.exists():
            return []
        with open(self.log_file, "r", encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip()]
