"""On-disk cache of result records: one JSON file per canonical key."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

SCHEMA_VERSION = 1
CACHE_ENV = "PRIMLIM_CACHE"


@dataclass
class ResultRecord:
    op: str
    params: Dict[str, Any]
    result: Any
    schema_version: int = SCHEMA_VERSION
    timestamp: str = ""
    runtime_ms: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ResultRecord":
        return cls(op=d["op"], params=d["params"], result=d["result"],
                   schema_version=d["schema_version"], timestamp=d["timestamp"],
                   runtime_ms=d["runtime_ms"])


def canonical_key(op: str, params: Dict[str, Any]) -> str:
    body = "&".join(f"{k}={params[k]}" for k in sorted(params))
    return f"v{SCHEMA_VERSION}:{op}?{body}"


class ResultCache:
    """Directory of ``<sha256(key)>.json`` files; safe to delete at any time."""

    def __init__(self, directory: os.PathLike | str):
        self.directory = Path(directory)

    @classmethod
    def from_env(cls, directory: Optional[str] = None) -> Optional["ResultCache"]:
        directory = directory or os.environ.get(CACHE_ENV)
        return cls(directory) if directory else None

    def path_for(self, key: str) -> Path:
        return self.directory / (hashlib.sha256(key.encode()).hexdigest() + ".json")

    def lookup(self, key: str) -> Optional[ResultRecord]:
        path = self.path_for(key)
        try:
            raw = json.loads(path.read_text())
            if raw.get("key") != key or raw["record"]["schema_version"] != SCHEMA_VERSION:
                return None
            return ResultRecord.from_dict(raw["record"])
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def store(self, key: str, record: ResultRecord) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"key": key, "record": asdict(record)})
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, self.path_for(key))

    def lookup_store(self, key: str,
                     compute: Callable[[], ResultRecord]) -> Tuple[ResultRecord, bool]:
        """Cached record for ``key`` if readable, else ``compute()`` stored under it."""
        hit = self.lookup(key)
        if hit is not None:
            return hit, True
        record = compute()
        try:
            self.store(key, record)
        except OSError:
            pass
        return record, False
