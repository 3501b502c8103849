"""Run manifests: reproducibility records written next to every output."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Mapping, Sequence


def _digest(path: Path) -> str:
    if path.is_dir():
        h = hashlib.sha256()
        for child in sorted(p for p in path.iterdir() if p.is_file()):
            h.update(child.name.encode())
            h.update(child.read_bytes())
        return h.hexdigest()
    return hashlib.sha256(path.read_bytes()).hexdigest()


def package_version() -> str:
    try:
        return metadata.version("segbound")
    except metadata.PackageNotFoundError:
        return "unknown"


def write_manifest(
    out_path: str | Path,
    command: str,
    config: Mapping,
    inputs: Sequence[str | Path] = (),
) -> Path:
    """Write <out_path>.manifest.json capturing the command, config
    snapshot, and input digests."""
    out_path = Path(out_path)
    manifest = {
        "command": command,
        "version": package_version(),
        "config": dict(config),
        "inputs": {str(p): _digest(Path(p)) for p in inputs},
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = out_path.with_name(out_path.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8")
    return path
