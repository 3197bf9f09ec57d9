"""Append-only result cache: JSON lines, one entry per line.

Entries carry the operation name, a canonical parameter serialization
with a stable 64-bit hash, the stored value, and a schema version.
Corrupt lines are skipped with a warning, never fatal.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from dataclasses import dataclass
from typing import Any, Optional

CACHE_VERSION = 1
CACHE_FILENAME = "hlsums-cache.jsonl"


def canonical_params(params: dict) -> str:
    """Deterministic serialization: sorted keys, compact separators;
    equal values hash equally regardless of how callers spelled them."""
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def params_hash(canon: str) -> str:
    return hashlib.blake2b(canon.encode(), digest_size=8).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    op: str
    params_hash: str
    params: dict
    value: Any
    version: int = CACHE_VERSION

    def to_line(self) -> str:
        return json.dumps(
            {
                "op": self.op,
                "paramsHash": self.params_hash,
                "params": self.params,
                "value": self.value,
                "version": self.version,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


class Cache:
    """Single-writer, multi-reader JSON-lines cache in a directory."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self.path = os.path.join(directory, CACHE_FILENAME)
        self._table: dict = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    key = (obj["op"], obj["version"], canonical_params(obj["params"]))
                    self._table[key] = obj["value"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    warnings.warn(f"skipping corrupt cache line {lineno} in {self.path}")

    def lookup(self, op: str, params: dict) -> Optional[Any]:
        return self._table.get((op, CACHE_VERSION, canonical_params(params)))

    def store(self, op: str, params: dict, value: Any) -> None:
        canon = canonical_params(params)
        entry = CacheEntry(op, params_hash(canon), json.loads(canon), value)
        with open(self.path, "a") as fh:
            fh.write(entry.to_line() + "\n")
        self._table[(op, CACHE_VERSION, canon)] = value
