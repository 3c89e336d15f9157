from .audit import AuditLogger
from .storage import RunStore, dump_json

__all__ = ["AuditLogger", "RunStore", "dump_json"]
