"""Table writing and re-reading for the CLI.

Both formats isolate the timestamp so that identical configurations produce
byte-identical data sections: in CSV it is the first header line, in JSON a
single top-level key.  Floats are serialized with repr and so round-trip
exactly.
"""
from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(path: str, meta: dict, columns: list, rows: list, fmt: str = "csv",
                volatile: dict | None = None) -> None:
    """Write a table; `volatile` (wall time etc.) lives on the timestamp line."""
    stamp = datetime.now(timezone.utc).isoformat()
    if volatile:
        stamp += " " + json.dumps(volatile, sort_keys=True)
    try:
        if fmt == "csv":
            buf = io.StringIO()
            buf.write(f"# timestamp: {stamp}\n")
            buf.write("# meta: " + json.dumps(meta, sort_keys=True) + "\n")
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
            text = buf.getvalue()
        elif fmt == "json":
            doc = {
                "timestamp": stamp,
                "meta": meta,
                "columns": list(columns),
                "rows": [list(r) for r in rows],
            }
            text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
        else:
            raise ValueError(f"unknown format {fmt!r}")
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write {path!r}: {e}") from e


def _parse(cell: str):
    for typ in (int, float):
        try:
            return typ(cell)
        except ValueError:
            continue
    return cell


def read_table(path: str):
    """(meta, columns, rows) with numeric cells parsed back."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return doc["meta"], doc["columns"], [tuple(r) for r in doc["rows"]]
    meta = {}
    columns = None
    rows = []
    data_lines = []
    for line in text.splitlines():
        if line.startswith("# timestamp:"):
            continue
        if line.startswith("# meta:"):
            meta = json.loads(line[len("# meta:"):])
            continue
        if line:
            data_lines.append(line)
    for cells in csv.reader(data_lines):
        if columns is None:
            columns = cells
        else:
            rows.append(tuple(_parse(c) for c in cells))
    return meta, columns, rows


def data_section(path: str) -> str:
    """The file contents with the timestamp stripped (for determinism checks)."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        doc.pop("timestamp", None)
        return json.dumps(doc, sort_keys=True, indent=1)
    return "\n".join(
        ln for ln in text.splitlines() if not ln.startswith("# timestamp:")
    )
