"""Run manifests: materialized config, output checksums, timings.

Written atomically (tmp file + rename) after a command completes, so a
manifest's presence implies the run finished.
"""

import hashlib
import json
import os
import tempfile

from . import backend


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def content_hash(config_used: dict) -> str:
    blob = json.dumps(config_used, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def write_manifest(out_dir, command: str, config_used: dict, outputs,
                   timings: dict, notes=None) -> str:
    data = {
        "command": command,
        "backend": backend.BACKEND_NAME,
        "config": {k: config_used[k] for k in sorted(config_used)},
        "config_hash": content_hash(config_used),
        "outputs": {os.path.basename(p): sha256_file(p) for p in outputs},
        "timings_seconds": timings,
    }
    if notes:
        data["notes"] = notes
    path = os.path.join(out_dir, "manifest.json")
    fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=".manifest")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, default=str)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
