"""On-disk result cache keyed by a hash of (module, parameters, format version)."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

FORMAT_VERSION = 1
DEFAULT_DIR = ".vkit-cache"


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    if override:
        return Path(override)
    return Path(os.environ.get("VKIT_CACHE", DEFAULT_DIR))


def _checksum(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    module: str
    params: dict[str, Any]
    payload: str
    version: int = FORMAT_VERSION

    @property
    def key(self) -> str:
        return entry_key(self.module, self.params, self.version)

    @property
    def checksum(self) -> str:
        return _checksum(self.payload)

    def to_json(self) -> str:
        return json.dumps(
            {
                "module": self.module,
                "params": self.params,
                "version": self.version,
                "checksum": self.checksum,
                "payload": self.payload,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> CacheEntry:
        """Parse and verify; raises ValueError on a bad checksum."""
        d = json.loads(text)
        entry = cls(d["module"], d["params"], d["payload"], d["version"])
        if entry.checksum != d["checksum"]:
            raise ValueError("cache entry checksum mismatch")
        return entry


def entry_key(module: str, params: dict[str, Any], version: int = FORMAT_VERSION) -> str:
    blob = json.dumps([module, params, version], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


class Cache:
    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        self.root = cache_dir(root)
        self.enabled = enabled

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, module: str, params: dict[str, Any]) -> str | None:
        """Payload of a valid entry, or None.  Corrupt or stale entries are dropped."""
        if not self.enabled:
            return None
        path = self._path(entry_key(module, params))
        try:
            entry = CacheEntry.from_json(path.read_text())
        except FileNotFoundError:
            return None
        except (ValueError, KeyError):
            path.unlink(missing_ok=True)
            return None
        if entry.version != FORMAT_VERSION or entry.module != module:
            path.unlink(missing_ok=True)
            return None
        return entry.payload

    def put(self, module: str, params: dict[str, Any], payload: str) -> CacheEntry:
        entry = CacheEntry(module, params, payload)
        if self.enabled:
            self.root.mkdir(parents=True, exist_ok=True)
            tmp = self._path(entry.key).with_suffix(".tmp")
            tmp.write_text(entry.to_json())
            tmp.replace(self._path(entry.key))
        return entry

    def entries(self) -> list[tuple[Path, CacheEntry | None]]:
        """All files with their parsed entry (None when unreadable)."""
        if not self.root.is_dir():
            return []
        out = []
        for path in sorted(self.root.glob("*.json")):
            try:
                out.append((path, CacheEntry.from_json(path.read_text())))
            except (ValueError, KeyError):
                out.append((path, None))
        return out

    def clear(self) -> int:
        n = 0
        for path, _ in self.entries():
            path.unlink(missing_ok=True)
            n += 1
        return n
