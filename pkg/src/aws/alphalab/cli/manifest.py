#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .. import __version__
from ..common.errors import ConfigError
from ..common.io import atomic_write_json, file_sha256

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """
    Record of one CLI run: enough to rerun it. Outputs are listed with their SHA-256 so a rerun can be compared
    file by file.
    """

    command: str
    argv: List[str]
    config_sha256: str = ""
    inputs: Dict[str, str] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    version: str = __version__
    outputs: Dict[str, str] = field(default_factory=dict)
    output_sha256: Dict[str, str] = field(default_factory=dict)
    out_dir: str = ""
    started_at: str = ""
    wall_clock_s: float = 0.0
    _t0: float = field(default=0.0, repr=False, compare=False)

    @classmethod
    def start(cls, command: str, argv: Sequence[str]) -> "RunManifest":
        manifest = cls(command=command, argv=list(argv))
        manifest.started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        manifest._t0 = time.monotonic()
        return manifest

    def add_input(self, path: Optional[Union[str, Path]]) -> None:
        """Hash an input file (or every file under an input directory)."""
        if path is None:
            return
        path = Path(path)
        if path.is_dir():
            for child in sorted(p for p in path.rglob("*") if p.is_file()):
                self.inputs[str(child)] = file_sha256(child)
        elif path.exists():
            self.inputs[str(path)] = file_sha256(path)

    def add_output(self, name: str, path: Union[str, Path]) -> None:
        self.outputs[name] = str(path)

    def to_record(self) -> Dict[str, Any]:
        record = asdict(self)
        record.pop("_t0")
        return record

    def finish(self, out_dir: Union[str, Path]) -> Path:
        """Hash the outputs, stamp the wall-clock time and write ``manifest.json`` atomically into ``out_dir``."""
        self.out_dir = str(out_dir)
        self.wall_clock_s = round(time.monotonic() - self._t0, 3)
        self.output_sha256 = {
            name: file_sha256(path) for name, path in sorted(self.outputs.items()) if Path(path).is_file()
        }
        return atomic_write_json(Path(out_dir) / MANIFEST_NAME, self.to_record())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunManifest":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                record = json.load(handle)
        except (OSError, ValueError) as err:
            raise ConfigError(f"Unable to read run manifest {path}: {err}") from err
        if "argv" not in record or "command" not in record:
            raise ConfigError(f"Run manifest {path} has no command line")
        return cls(**record)
