"""CSV/JSON writers and the run manifest.

CSV cells carry 17 significant digits so doubles round-trip losslessly;
complex columns are split into re_*/im_* pairs by the callers.  The manifest
lists every output file with its sha256 and is written atomically (tmp file
+ rename) only after all outputs exist, so an interrupted run leaves no
manifest behind.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path
from typing import Dict, Iterable, List, Sequence


def fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, complex):
        raise TypeError("split complex values into re_/im_ columns")
    return f"{float(value):.17g}"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_json(path: Path, payload) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(out_dir: Path, config_snapshot: Dict[str, str], version: str,
                   started: float, outputs: List[Path], seed=None,
                   command: str = "") -> Path:
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "config": dict(sorted(config_snapshot.items())),
        "version": version,
        "seed": seed,
        "started_unix": started,
        "finished_unix": time.time(),
        "outputs": [
            {"file": p.name, "sha256": sha256_of(p)} for p in sorted(outputs)
        ],
    }
    tmp = out_dir / ".manifest.json.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    final = out_dir / "manifest.json"
    os.replace(tmp, final)
    return final
