"""Persistent cache of computed singular vectors.

The cache file is JSON with a top-level schema version and one entry per
(c, h, grade) key.  Writes go through an atomic replace so concurrent
readers see either the old or the new complete file; the store is
append-only.  A corrupted file is reported on stderr and treated as empty,
so the solver falls back to recomputation.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple

from .exact import rat
from .verma import HighestWeightParams, VermaVector, singular_vector

SCHEMA_VERSION = 1

CacheKey = Tuple[Fraction, Fraction, int]


@dataclass(frozen=True)
class CacheEntry:
    """One cached singular vector, keyed by (c, h, grade)."""

    c: Fraction
    h: Fraction
    grade: int
    vector: VermaVector

    def to_json_dict(self) -> dict:
        return {
            "c": str(self.c),
            "h": str(self.h),
            "grade": self.grade,
            "vector": self.vector.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CacheEntry":
        return cls(
            c=rat(data["c"]),
            h=rat(data["h"]),
            grade=int(data["grade"]),
            vector=VermaVector.from_json_dict(data["vector"]),
        )


class SingularVectorCache:
    """Append-only JSON-backed store of singular vectors."""

    def __init__(self, path):
        self.path = Path(path)
        self._entries: Dict[CacheKey, CacheEntry] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            data = json.loads(self.path.read_text())
            if data.get("schema_version") != SCHEMA_VERSION:
                raise ValueError(f"unsupported schema_version {data.get('schema_version')}")
            for raw in data["entries"]:
                entry = CacheEntry.from_json_dict(raw)
                self._entries[(entry.c, entry.h, entry.grade)] = entry
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            print(
                f"warning: cache file {self.path} is unreadable ({exc}); recomputing",
                file=sys.stderr,
            )
            self._entries = {}

    def _write(self) -> None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "entries": [
                entry.to_json_dict()
                for _, entry in sorted(
                    self._entries.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]), kv[0][2])
                )
            ],
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(self.path.parent), prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                json.dump(payload, handle, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get(self, c, h, grade: int) -> Optional[VermaVector]:
        entry = self._entries.get((rat(c), rat(h), grade))
        return entry.vector if entry else None

    def put(self, c, h, grade: int, vector: VermaVector) -> None:
        key = (rat(c), rat(h), grade)
        self._entries[key] = CacheEntry(key[0], key[1], grade, vector)
        self._write()

    def __len__(self) -> int:
        return len(self._entries)


def cached_singular_vector(
    params: HighestWeightParams,
    grade: int,
    cache: Optional[SingularVectorCache] = None,
    verbose: bool = False,
) -> Optional[VermaVector]:
    """singular_vector with an optional persistent cache in front of it.

    Results with and without a cache are identical; a hit skips the solver,
    observable through the stderr timing line under ``verbose``.
    """
    if cache is not None:
        start = time.perf_counter()
        hit = cache.get(params.c, params.h, grade)
        if hit is not None:
            if verbose:
                ms = (time.perf_counter() - start) * 1000
                print(
                    f"[cache] hit (c={params.c}, h={params.h}, grade={grade}) in {ms:.2f} ms",
                    file=sys.stderr,
                )
            return hit
    start = time.perf_counter()
    vec = singular_vector(params, grade)
    if verbose:
        ms = (time.perf_counter() - start) * 1000
        print(
            f"[cache] miss (c={params.c}, h={params.h}, grade={grade}); solved in {ms:.2f} ms",
            file=sys.stderr,
        )
    if vec is not None and cache is not None:
        cache.put(params.c, params.h, grade, vec)
    return vec
