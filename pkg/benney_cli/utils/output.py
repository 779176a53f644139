import csv
import io
import json
import math
from enum import Enum
from pathlib import Path

import numpy as np

from benney_cli.errors import ParameterDomainError

FORMATS = ("json", "csv")


def format_float(value):
    """17 significant digits, enough to round-trip a double."""
    return format(value, ".17g")


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def to_jsonable(value):
    """Convert numpy values, enums and complex numbers into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return value
    return value


def render_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buffer.getvalue()


def render_json(data):
    return json.dumps(to_jsonable(data), indent=2) + "\n"


def write_text(text, out=None):
    """Write an artifact to a file, or return it for stdout when out is None."""
    if out is None:
        return text
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(text)
    return None


def write_csv(header, rows, out=None):
    return write_text(render_csv(header, rows), out)


def write_json(data, out=None):
    return write_text(render_json(data), out)


def write_artifact(fmt, data, header, rows, out=None):
    """Render `data` as JSON or `header`/`rows` as CSV."""
    if fmt == "json":
        return write_json(data, out)
    if fmt == "csv":
        return write_csv(header, rows, out)
    raise ParameterDomainError(f"unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")
