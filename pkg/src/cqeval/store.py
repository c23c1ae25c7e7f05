"""Line-delimited JSON stores with a one-line header.

Used for the question corpus, propagated mappings, and verdict dumps.
Writes go through a temp file and an atomic rename so a crash never
leaves a half-written store behind.  The run journal is different: it
is append-only and headerless, and lives in the runner module.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

SCHEMA_VERSION = 1


class StoreError(Exception):
    pass


def write_ldjson(path: str | Path, store_name: str, records) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"store": store_name, "schema_version": SCHEMA_VERSION},
                                sort_keys=True) + "\n")
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def read_ldjson(path: str | Path, store_name: str) -> list:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise StoreError(f"{path}: empty store file")
    header = json.loads(lines[0])
    if header.get("store") != store_name:
        raise StoreError(
            f"{path}: expected a {store_name!r} store, found {header.get('store')!r}"
        )
    if header.get("schema_version") != SCHEMA_VERSION:
        raise StoreError(f"{path}: unsupported schema version {header.get('schema_version')!r}")
    out = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise StoreError(f"{path}:{i}: bad record: {e}") from None
    return out


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
