"""Atomic file output and the per-run manifest.

Outputs are written to a temporary file in the target directory and moved
into place, so failed runs never leave partial files behind.  Every CLI
run records exactly one manifest (command, parameters, version, timestamp,
outputs, summary).  The timestamp honours SOURCE_DATE_EPOCH for
byte-reproducible manifests.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from datetime import datetime, timezone
from pathlib import Path


def write_atomic(path, data):
    """Write text or bytes to ``path`` via a temp file and atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    binary = isinstance(data, bytes)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        kwargs = {} if binary else {"newline": ""}
        with os.fdopen(fd, "wb" if binary else "w", **kwargs) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return datetime.fromtimestamp(t, tz=timezone.utc).isoformat()


def write_manifest(outdir, command: str, parameters: dict, outputs, summary: dict, version: str):
    """Write <outdir>/manifest.json describing one run; returns its path."""
    manifest = {
        "command": command,
        "parameters": parameters,
        "version": version,
        "timestamp": _timestamp(),
        "outputs": sorted(str(o) for o in outputs),
        "summary": summary,
    }
    path = Path(outdir) / "manifest.json"
    write_atomic(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path
