"""Content-addressed JSON cache on disk.

Entries are written to a ``*.tmp`` file in the cache directory and moved into
place with ``os.replace``, so readers never see partial files and concurrent
writers of the same key simply race to an identical result.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

ENV_VAR = "WEYLITH_CACHE_DIR"
DEFAULT_DIR = ".weylith-cache"
SUFFIX = ".json"


def resolve_cache_dir(flag: str | os.PathLike | None = None) -> Path:
    """Flag beats the environment variable, which beats the default."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path(DEFAULT_DIR)


def cache_key(payload: Any) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def load(directory: Path, key: str) -> Any | None:
    path = Path(directory) / (key + SUFFIX)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (FileNotFoundError, json.JSONDecodeError):
        return None
    try:
        os.utime(path)  # mark as recently used for the LRU collector
    except OSError:
        pass
    return doc


def store(directory: Path, key: str, doc: Any) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    final = directory / (key + SUFFIX)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=key[:16] + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, final)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return final


@dataclass
class GCReport:
    removed: list[str] = field(default_factory=list)
    freed_bytes: int = 0
    remaining_bytes: int = 0

    def to_dict(self) -> dict:
        return {
            "removed": self.removed,
            "freed_bytes": self.freed_bytes,
            "remaining_bytes": self.remaining_bytes,
        }


def cache_gc(directory: str | os.PathLike, max_bytes: int) -> GCReport:
    """Delete least-recently-used entries until the total size is at most ``max_bytes``.

    Temporary files of in-flight writers are neither counted nor touched.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"cache directory {directory} does not exist")
    entries = []
    for path in directory.iterdir():
        if path.suffix != SUFFIX or not path.is_file():
            continue
        try:
            st = path.stat()
        except FileNotFoundError:
            continue
        entries.append((st.st_mtime, path.name, st.st_size, path))
    entries.sort()
    total = sum(size for _, _, size, _ in entries)
    report = GCReport()
    for _, name, size, path in entries:
        if total <= max_bytes:
            break
        try:
            path.unlink()
        except FileNotFoundError:
            continue
        total -= size
        report.removed.append(name)
        report.freed_bytes += size
    report.remaining_bytes = total
    return report
