"""CSV and JSON writers that embed the generating config.

Floats are written with ``repr``, the shortest string that parses back to
the same double. CSV files start with a ``# config: {...}`` comment line.
"""

import csv
import json
from pathlib import Path

__all__ = ["format_value", "write_csv", "read_csv", "write_json", "dumps"]


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_csv(path, columns, rows, config=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write("# config: " + json.dumps(config, allow_nan=False) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(v) for v in row])
    return path


def read_csv(path):
    """Return ``(config, columns, rows)`` with numeric cells parsed as float."""
    config = None
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("# config: "):
        config = json.loads(lines[0][len("# config: "):])
        lines = lines[1:]
    reader = csv.reader(lines)
    columns = next(reader)
    rows = [[_parse(c) for c in r] for r in reader]
    return config, columns, rows


def _parse(cell):
    if cell in ("true", "false"):
        return cell == "true"
    try:
        return float(cell)
    except ValueError:
        return cell


def write_json(path, payload, config=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"config": config, **payload} if config is not None else dict(payload)
    path.write_text(dumps(body))
    return path
