"""
Atomic File Writes
==================

Run artifacts are either complete or absent. Every writer goes through these helpers:
the content is written to a temporary file in the target directory and then moved into
place with os.replace, which is atomic on POSIX and Windows when source and target share
a filesystem.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Union

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """
    Write bytes to ``path`` atomically, creating parent directories.

    Returns:
        The final path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write UTF-8 text to ``path`` atomically."""
    return atomic_write_bytes(path, text.encode("utf-8"))


def dumps_json(payload: Any) -> str:
    """
    Serialize to JSON deterministically.

    Keys are sorted and floats keep their repr precision, so identical inputs always
    produce byte-identical files.
    """
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
