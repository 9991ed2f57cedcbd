"""Run manifests: input/output digests plus the config snapshot of a run.

The run id is derived from the inputs and config, so identical runs get
identical ids; wall-clock timestamps live only in the manifest itself,
never inside the pipeline outputs (which must be byte-identical across
reruns of the same inputs).
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def tree_digest(directory) -> str:
    """Digest of a directory: file names plus their content digests."""
    digest = hashlib.sha256()
    for path in sorted(Path(directory).rglob("*")):
        if path.is_file():
            digest.update(path.name.encode("utf-8"))
            digest.update(file_digest(path).encode("ascii"))
    return digest.hexdigest()


class RunManifest:
    def __init__(self, subcommand: str, config: dict):
        self.subcommand = subcommand
        self.config = dict(config)
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.started = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self.finished = ""

    def add_input(self, path) -> None:
        path = Path(path)
        self.inputs[str(path)] = tree_digest(path) if path.is_dir() else file_digest(path)

    def add_output(self, path) -> None:
        self.outputs[str(path)] = file_digest(path)

    @property
    def run_id(self) -> str:
        basis = json.dumps(
            {"subcommand": self.subcommand, "inputs": self.inputs, "config": self.config},
            sort_keys=True, ensure_ascii=False,
        )
        return hashlib.sha256(basis.encode("utf-8")).hexdigest()[:12]

    def write(self, out_path) -> Path:
        self.finished = datetime.now(timezone.utc).isoformat(timespec="seconds")
        payload = {
            "run_id": self.run_id,
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "config": self.config,
            "outputs": self.outputs,
            "started": self.started,
            "finished": self.finished,
        }
        path = Path(str(out_path) + ".manifest.json")
        path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        return path
