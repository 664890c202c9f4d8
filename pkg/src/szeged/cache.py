"""Versioned JSON cache of computed tables."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .records import SCHEMA_VERSION

log = logging.getLogger(__name__)

CACHE_ENV = "SZEGED_CACHE_DIR"
CACHE_FILE = "szeged-cache.json"


def default_cache_path() -> Path | None:
    root = os.environ.get(CACHE_ENV)
    return Path(root) / CACHE_FILE if root else None


class ResultCache:
    """Key-value store persisted as one JSON document.

    A missing file starts empty.  A file that cannot be parsed or carries
    another schema version is ignored with a notice, so everything it held
    gets recomputed and the file is rewritten on the next store.
    """

    def __init__(self, path: str | os.PathLike | None) -> None:
        self.path = Path(path) if path is not None else None
        self.entries: dict[str, object] = {}
        self.discarded = False
        self._load()

    def _load(self) -> None:
        if self.path is None or not self.path.exists():
            return
        try:
            doc = json.loads(self.path.read_text())
        except (OSError, ValueError) as exc:
            log.warning("cache %s unreadable (%s); recomputing", self.path, exc)
            self.discarded = True
            return
        if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
            found = doc.get("schema_version") if isinstance(doc, dict) else None
            log.warning("cache %s has version %r, expected %d; recomputing", self.path, found, SCHEMA_VERSION)
            self.discarded = True
            return
        entries = doc.get("entries")
        if isinstance(entries, dict):
            self.entries = entries

    def get(self, key: str):
        return self.entries.get(key)

    def put(self, key: str, value, save: bool = True) -> None:
        self.entries[key] = value
        if save:
            self.save()

    def save(self) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"schema_version": SCHEMA_VERSION, "entries": self.entries}
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".cache-")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, self.path)
