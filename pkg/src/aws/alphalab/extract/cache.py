#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import json
import logging
import os
import threading
from pathlib import Path
from typing import Dict, Optional, Union

from ..backfill.types import EventBundle
from ..common.io import canonical_json
from .prompts import PromptTemplate
from .types import StockFeatures


def cache_key(template: PromptTemplate, bundle: EventBundle) -> str:
    return f"{template.hash}:{bundle.content_hash}"


class ExtractionCache:
    """
    Extraction results keyed by (template hash, bundle content hash). Entries are appended to
    ``extractions.jsonl`` so the cache survives restarts when it lives beside the backfill log; ``path=None``
    keeps it in memory.
    """

    FILE_NAME = "extractions.jsonl"

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        if self.path is not None and self.path.is_dir():
            self.path = self.path / self.FILE_NAME
        self._entries: Dict[str, StockFeatures] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            with open(self.path, encoding="utf-8") as handle:
                for line in handle:
                    if line.strip():
                        record = json.loads(line)
                        self._entries[record["key"]] = StockFeatures.from_record(record["features"])
            logging.info(f"Loaded {len(self._entries)} cached extractions from {self.path}")

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def get(self, key: str) -> Optional[StockFeatures]:
        found = self._entries.get(key)
        if found is None:
            self.misses += 1
        else:
            self.hits += 1
        return found

    def put(self, key: str, features: StockFeatures) -> None:
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = features
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as handle:
                    handle.write(canonical_json({"key": key, "features": features.to_record()}) + "\n")
                    handle.flush()
                    os.fsync(handle.fileno())
