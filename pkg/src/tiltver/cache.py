"""Content-addressed on-disk cache of response documents."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator

from . import __version__
from .verify.report import canonical_json, stable_json

log = logging.getLogger(__name__)

ENV_VAR = "TILTVER_CACHE_DIR"
DEFAULT_DIR = ".tiltver-cache"


def default_cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or DEFAULT_DIR)


def request_key(request: dict) -> str:
    return hashlib.sha256(canonical_json(request).encode()).hexdigest()


@dataclass
class CacheEntry:
    key: str
    request: dict
    payload: dict
    version: str
    created: float

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "request": self.request,
            "payload": self.payload,
            "version": self.version,
            "created": self.created,
        }


class ResultCache:
    """One JSON file per entry under ``root/ab/cd/<digest>.json``.

    ``validator`` may reject a stored payload (for example a report whose
    witnesses no longer re-check); rejected and unreadable entries are misses.
    """

    def __init__(self, root: Path | str, validator: Callable[[dict], list[str]] | None = None):
        self.root = Path(root)
        self.validator = validator

    def path(self, key: str) -> Path:
        return self.root / key[:2] / key[2:4] / f"{key}.json"

    def _load(self, path: Path) -> CacheEntry:
        data = json.loads(path.read_text(encoding="utf-8"))
        entry = CacheEntry(data["key"], data["request"], data["payload"], data["version"], data["created"])
        if entry.key != path.stem or request_key(entry.request) != entry.key:
            raise ValueError("digest does not match the stored request")
        return entry

    def get(self, key: str) -> CacheEntry | None:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            entry = self._load(path)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
            return None
        if entry.version != __version__:
            return None
        if self.validator is not None:
            errs = self.validator(entry.payload)
            if errs:
                log.warning("ignoring cache entry %s that fails re-validation: %s", path, errs[0])
                return None
        return entry

    def put(self, request: dict, payload: dict) -> CacheEntry:
        key = request_key(request)
        entry = CacheEntry(key, request, payload, __version__, time.time())
        path = self.path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(stable_json(entry.to_json()))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return entry

    def entries(self) -> Iterator[tuple[Path, CacheEntry | None]]:
        if not self.root.exists():
            return
        for path in sorted(self.root.glob("*/*/*.json")):
            try:
                yield path, self._load(path)
            except (OSError, ValueError, KeyError, TypeError):
                yield path, None

    def gc(self) -> int:
        """Delete unreadable entries, entries from other versions and stray temp files."""
        removed = 0
        for path, entry in list(self.entries()):
            if entry is None or entry.version != __version__:
                path.unlink()
                removed += 1
        if self.root.exists():
            for tmp in self.root.glob("*/*/.tmp-*"):
                tmp.unlink()
                removed += 1
        return removed
