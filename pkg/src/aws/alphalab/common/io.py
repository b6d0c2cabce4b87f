#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

PathLike = Union[str, os.PathLike]


def canonical_json(payload: Any) -> str:
    """
    Serialize to JSON with sorted keys and fixed separators so identical payloads always produce identical bytes.
    """
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def content_hash(*parts: str) -> str:
    """
    64-bit content hash (16 hex characters) over the given text parts. Parts are joined with a unit separator so
    that ("ab", "c") and ("a", "bc") hash differently.
    """
    digest = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8)
    return digest.hexdigest()


def file_sha256(path: PathLike) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            sha.update(chunk)
    return sha.hexdigest()


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write text to a temporary file in the destination directory and rename it into place.

    :param path: Destination file.
    :param text: Content to write (UTF-8).
    :return: The destination path.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def atomic_write_json(path: PathLike, payload: Any, indent: int = 2) -> Path:
    return atomic_write_text(path, json.dumps(payload, sort_keys=True, indent=indent, allow_nan=False) + "\n")


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Atomically write a CSV file with a header row. Floats are written with repr precision so reruns are
    byte-identical.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if value is None else (repr(value) if isinstance(value, float) else value) for value in row])
    return atomic_write_text(path, buffer.getvalue())
