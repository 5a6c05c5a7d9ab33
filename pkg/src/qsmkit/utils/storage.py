# this_file: src/qsmkit/utils/storage.py
"""Artifact manifest kept next to pipeline outputs."""

import hashlib
import json
from pathlib import Path

from loguru import logger


def file_digest(path: Path) -> str:
    """SHA-256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class ArtifactManifest:
    """Records every file a run writes, with its kind and content hash."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.manifest_file = self.output_dir / "manifest.json"

    def _load(self) -> dict:
        if not self.manifest_file.exists():
            return {}
        try:
            with open(self.manifest_file) as f:
                return json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            logger.warning(f"Failed to load artifact manifest: {e}")
            return {}

    def _save(self, entries: dict) -> None:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        with open(self.manifest_file, "w") as f:
            json.dump(entries, f, indent=2, sort_keys=True)

    def record(self, name: str, path: Path, kind: str) -> dict:
        """Add or replace the entry for ``name``; paths are stored relative to the output dir when possible."""
        path = Path(path)
        try:
            shown = str(path.resolve().relative_to(self.output_dir.resolve()))
        except ValueError:
            shown = str(path)
        entry = {"path": shown, "kind": kind, "sha256": file_digest(path)}
        entries = self._load()
        entries[name] = entry
        self._save(entries)
        return entry

    def entries(self) -> dict:
        return self._load()
