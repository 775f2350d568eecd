"""Deterministic CSV/JSON emission shared by the report types and the CLI.

CSV floats use %.17g (round-trip exact); JSON uses Python's shortest
round-trip repr under sorted keys.  Identical inputs produce byte-identical
files, which the output-hashing in the CLI depends on.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json


def fmt_float(x: float) -> str:
    """Round-trip decimal form for CSV cells."""
    return "%.17g" % x


def csv_text(header: list[str], rows: list[list]) -> str:
    """RFC-4180 CSV (CRLF line endings, minimal quoting); floats via fmt_float."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def config_hash(obj) -> str:
    """Short stable digest of a JSON-serializable config, for file names."""
    canon = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]
