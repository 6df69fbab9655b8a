#!/usr/bin/env python3
"""
On-disk cache of JSON results keyed by a sha256 of the canonical request.
"""

import hashlib
import json
import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)


def compute_sha256(payload) -> str:
    """SHA-256 of the canonical JSON encoding of payload."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CacheManager:
    """
    Files live at <cache_dir>/<kind>/<sha256>.json. Each entry stores its schema
    version; entries written under another version are treated as misses.
    A cache_dir of None disables the cache.
    """

    def __init__(self, cache_dir: Optional[str], schema_version: str):
        self.cache_dir = cache_dir
        self.schema_version = schema_version

    @property
    def enabled(self) -> bool:
        return self.cache_dir is not None

    def key(self, kind: str, params: dict, operation: str, request) -> str:
        return compute_sha256({
            "schema": self.schema_version,
            "kind": kind,
            "params": params,
            "operation": operation,
            "input": request,
        })

    def path(self, kind: str, key: str) -> str:
        return os.path.join(self.cache_dir, kind, f"{key}.json")

    def load(self, kind: str, key: str) -> Optional[dict]:
        if not self.enabled:
            return None
        path = self.path(kind, key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"ignoring unreadable cache entry {path}: {e}")
            return None
        if entry.get("schema") != self.schema_version:
            logger.info(f"ignoring cache entry {path} with schema {entry.get('schema')!r}")
            return None
        return entry.get("payload")

    def store(self, kind: str, key: str, payload: dict) -> Optional[str]:
        if not self.enabled:
            return None
        path = self.path(kind, key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump({"schema": self.schema_version, "payload": payload}, f, indent=4, sort_keys=True,
                      ensure_ascii=False)
        os.replace(tmp, path)
        return path

    def clear(self) -> int:
        """Delete every cached entry; returns the number of files removed."""
        if not self.enabled or not os.path.isdir(self.cache_dir):
            return 0
        removed = 0
        for root, _, files in os.walk(self.cache_dir):
            for name in files:
                if name.endswith(".json"):
                    os.remove(os.path.join(root, name))
                    removed += 1
        return removed
