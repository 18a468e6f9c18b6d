"""Output directory management for command artifacts."""

import logging
from pathlib import Path
from typing import Any

import pandas as pd

from har_chain.utils.jsonio import write_json

logger = logging.getLogger(__name__)


class ArtifactWriter:
    """Owns one command's output directory and records every file written to it.

    JSON is written with sorted keys, two-space indentation and a trailing newline;
    CSV uses ``\\n`` line endings. Nothing time-dependent is written, so reruns with
    the same configuration produce identical files.
    """

    def __init__(self, out_dir: str | Path):
        """Initialize the writer.

        :param out_dir: Output directory, created if missing.
        """
        self.base_path = Path(out_dir)
        self.base_path.mkdir(parents=True, exist_ok=True)
        self.written: list[Path] = []

    def path(self, filename: str) -> Path:
        return self.base_path / filename

    def record(self, path: Path | list[Path]) -> None:
        """Register files written by other components (e.g. ``Model.save``)."""
        self.written.extend(path if isinstance(path, list) else [path])

    def write_json(self, filename: str, data: Any) -> Path:
        path = write_json(self.path(filename), data)
        self.record(path)
        logger.debug(f"Wrote {path}")
        return path

    def write_frame(self, filename: str, frame: pd.DataFrame, index: bool = False) -> Path:
        path = self.path(filename)
        frame.to_csv(path, index=index, lineterminator="\n", float_format="%.10g")
        self.record(path)
        logger.debug(f"Wrote {path}")
        return path

    def write_manifest(self, command: str, version: str, config: dict[str, Any]) -> Path:
        """Write ``run_manifest.json``; the file is itself a valid ``--config`` input."""
        return self.write_json("run_manifest.json", {"command": command, "version": version, "config": config})

    def summary(self) -> list[str]:
        return sorted(p.name for p in self.written)
