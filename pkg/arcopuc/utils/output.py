# Copyright (c) 2025 Alibaba Group and its affiliates

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from __future__ import annotations

import json
import math
import os
import sys
import tempfile
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import pandas as pd

from arcopuc.utils.logger_utils import Logger

LOG = Logger.get_logger(__name__)

JSON_SCHEMA = 1
DEFAULT_FLOAT_FORMAT = "%.17g"
STDOUT = "-"


def save_file(file_path: str | Path, content: str) -> None:
    """
    Write ``content`` through a temporary file in the same directory and rename it.

    A failed run therefore never leaves a partial file behind. ``-`` writes to
    stdout instead.
    """
    if str(file_path) == STDOUT:
        sys.stdout.write(content)
        sys.stdout.flush()
        return
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    LOG.info(f"wrote {path}")


def _meta_value(value: Any, float_format: str) -> str:
    if isinstance(value, float):
        return float_format % value
    return str(value)


def frame_to_csv(
    frame: pd.DataFrame,
    metadata: Mapping[str, Any] | None = None,
    float_format: str = DEFAULT_FLOAT_FORMAT,
) -> str:
    """CSV text with ``# key: value`` header lines (keys sorted) before the table."""
    lines = [
        f"# {key}: {_meta_value(value, float_format)}"
        for key, value in sorted((metadata or {}).items())
    ]
    body = frame.to_csv(index=False, float_format=float_format, lineterminator="\n")
    return "".join(line + "\n" for line in lines) + body


def _json_cell(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else str(value)
    if hasattr(value, "item"):
        return _json_cell(value.item())
    return value


def frame_to_json(frame: pd.DataFrame, metadata: Mapping[str, Any] | None = None) -> str:
    """Versioned JSON document {schema, meta, columns, rows}; NaN becomes null."""
    meta = sorted((metadata or {}).items())
    rows = frame.itertuples(index=False, name=None)
    payload = {
        "schema": JSON_SCHEMA,
        "meta": {key: _json_cell(value) for key, value in meta},
        "columns": list(frame.columns),
        "rows": [[_json_cell(v) for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def write_table(
    frame: pd.DataFrame,
    out: str | Path,
    fmt: str = "csv",
    metadata: Mapping[str, Any] | None = None,
    float_format: str = DEFAULT_FLOAT_FORMAT,
) -> None:
    """Render ``frame`` as csv or json and write it atomically to ``out``."""
    if fmt == "csv":
        content = frame_to_csv(frame, metadata, float_format)
    elif fmt == "json":
        content = frame_to_json(frame, metadata)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    save_file(out, content)
