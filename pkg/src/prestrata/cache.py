"""Content-addressed result cache with atomic writes.

Keys hash the full query identity (schema version, algorithm revision, n,
degree, locus name), so bumping ALGORITHM_REVISION invalidates every prior
entry by key mismatch rather than by deletion.  Writes go through a
temporary file and an atomic rename; concurrent writers of the same key
leave exactly one complete JSON file.  All I/O failures degrade to cache
misses with a warning on stderr — the cache can slow a run down but never
change an answer.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile

SCHEMA_VERSION = 1

# Bump on any change to basis enumeration order, relation generation, or the
# result record layout; stale entries then miss by construction.
ALGORITHM_REVISION = "2026.08-1"


def cache_key(
    n: int,
    degree: int,
    locus_name: str,
    *,
    schema: int = SCHEMA_VERSION,
    revision: str = ALGORITHM_REVISION,
) -> str:
    payload = json.dumps(
        {
            "schema": schema,
            "revision": revision,
            "n": n,
            "degree": degree,
            "locus": locus_name,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def default_cache_dir() -> str | None:
    return os.environ.get("CHOW_CACHE_DIR") or None


def _warn(message: str) -> None:
    print(f"cache warning: {message}", file=sys.stderr)


def cache_get(cache_dir: str, key: str) -> dict | None:
    path = os.path.join(cache_dir, key + ".json")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        _warn(f"unreadable entry {path}: {exc}")
        return None


def cache_put(cache_dir: str, key: str, value: dict) -> bool:
    path = os.path.join(cache_dir, key + ".json")
    tmp_path = None
    try:
        os.makedirs(cache_dir, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=cache_dir, prefix=key, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(value, fh, sort_keys=True)
        os.replace(tmp_path, path)
        tmp_path = None
        return True
    except OSError as exc:
        _warn(f"write failed for {path}: {exc}")
        return False
    finally:
        if tmp_path is not None:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
