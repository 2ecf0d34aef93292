"""
Atomic output helpers.

Files are written to a temporary sibling and renamed into place, so an
interrupted run never leaves a truncated CSV behind.
"""

import contextlib
import csv
import json
import logging
import os
import tempfile
from typing import Any, Dict, Iterable, Iterator, List, TextIO

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def atomic_write(path: str) -> Iterator[TextIO]:
    """
    Open a text file for writing that only appears at ``path`` on success.

    Args:
        path: Destination path

    Yields:
        A writable text handle
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(
        dir=directory, prefix=f".{os.path.basename(path)}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.remove(tmp_path)
        raise
    logger.debug(f"Wrote {path}")


def write_csv(path: str, fieldnames: List[str], rows: Iterable[Dict[str, Any]]) -> None:
    """
    Write rows to a CSV file atomically.

    Args:
        path: Destination path
        fieldnames: Column order
        rows: Row dictionaries keyed by column name
    """
    with atomic_write(path) as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: _cell(row.get(name)) for name in fieldnames})


def write_json(path: str, payload: Dict[str, Any]) -> None:
    """Write a JSON document atomically with sorted keys."""
    with atomic_write(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)
