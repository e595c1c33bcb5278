"""Config loading and CSV/JSON I/O shared by the CLI."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from .errors import ValidationError
from .transmission import to_micrometres

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SLIT_HEADER = ("delta_h_um", "n_count")
LENGTH_HEADER = ("x_m", "n_count")


def load_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}", fields=["config"]) from None
    try:
        if path.suffix.lower() == ".json":
            return json.loads(text)
        return tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ValidationError(f"malformed config {path}: {exc}", fields=["config"]) from None


def parse_points_csv(text: str, source: str = "<input>"):
    """Return (header, points); header is SLIT_HEADER or LENGTH_HEADER.

    Slit widths come back in metres (the file carries micrometres).
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValidationError(f"{source}: empty CSV", fields=["input"])
    header = tuple(h.strip() for h in rows[0])
    if header not in (SLIT_HEADER, LENGTH_HEADER):
        raise ValidationError(
            f"{source}:1: header must be {','.join(SLIT_HEADER)} or {','.join(LENGTH_HEADER)}", fields=["input"]
        )
    scale = 1e-6 if header == SLIT_HEADER else 1.0
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ValidationError(f"{source}:{lineno}: expected 2 columns, got {len(row)}", fields=["input"])
        try:
            x, n = float(row[0]), float(row[1])
        except ValueError:
            raise ValidationError(f"{source}:{lineno}: not a number: {','.join(row)}", fields=["input"]) from None
        points.append((x * scale, n))
    return header, points


def read_points_csv(path: str | Path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", fields=["input"]) from None
    return parse_points_csv(text, str(path))


def points_csv(points, header=SLIT_HEADER) -> str:
    conv = to_micrometres if header == SLIT_HEADER else float
    lines = [",".join(header)]
    lines += [f"{conv(float(x))!r},{float(n)!r}" for x, n in points]
    return "\n".join(lines) + "\n"


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
