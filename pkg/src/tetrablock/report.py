"""CSV / JSON emission of result rows."""

import csv
import io
import json
import os
from pathlib import Path

OUTPUT_DIR_ENV = "TETRABLOCK_OUTPUT_DIR"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def _json_value(v):
    if hasattr(v, "item"):
        return v.item()
    return v


def as_dict(row):
    return row.to_dict() if hasattr(row, "to_dict") else dict(row)


def format_rows(rows, fmt="csv", fields=None):
    rows = [as_dict(r) for r in rows]
    if fmt == "json":
        clean = [{k: _json_value(v) for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    header = list(fields or (rows[0] if rows else []))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in header])
    return buf.getvalue()


def resolve_output(path):
    """Relative paths land in ``$TETRABLOCK_OUTPUT_DIR`` when it is set."""
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def write_rows(rows, fmt="csv", path=None, stream=None, fields=None):
    text = format_rows(rows, fmt, fields)
    if path is None:
        stream.write(text)
        return None
    p = resolve_output(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)
    return p
