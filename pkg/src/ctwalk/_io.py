"""Deterministic file output.

All writers go through a temp-file-then-rename step so partial files
never appear under the final name, and floats are formatted with repr
(shortest round-trip form) so identical runs produce identical bytes.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

UNITS_NOTE = "time in units of 1/gamma"


def config_hash(config: Mapping) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_text_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence],
    config: Mapping | None = None,
    extra_comments: Sequence[str] = (),
) -> Path:
    lines = []
    if config is not None:
        lines.append(f"# config_hash: {config_hash(config)}")
    lines.append(f"# units: {UNITS_NOTE}")
    lines.extend(f"# {comment}" for comment in extra_comments)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    lines.append("")
    return write_text_atomic(path, "\n".join(lines))


def write_json(path: str | Path, payload) -> Path:
    return write_text_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_matrix_csv(
    path: str | Path,
    matrix,
    config: Mapping | None = None,
    extra_comments: Sequence[str] = (),
) -> Path:
    rows = ([format_value(float(v)) for v in row] for row in matrix)
    lines = []
    if config is not None:
        lines.append(f"# config_hash: {config_hash(config)}")
    lines.append(f"# units: {UNITS_NOTE}")
    lines.extend(f"# {comment}" for comment in extra_comments)
    lines.extend(",".join(row) for row in rows)
    lines.append("")
    return write_text_atomic(path, "\n".join(lines))
