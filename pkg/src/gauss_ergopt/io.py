"""Deterministic JSON and CSV output."""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

SCHEMA = "v1"
SWEEP_HEADER = ("m", "Q_m_lower", "Q_m_upper")
GRID_HEADER = ("x", "value")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return _plain(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def to_json_text(payload: dict) -> str:
    doc = {"schema": SCHEMA}
    doc.update(_plain(payload))
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def sweep_csv_text(rows) -> str:
    """Rows of ``(m, lower, upper)``; a missing upper bound is left empty."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for m, lo, hi in rows:
        w.writerow((m, repr(float(lo)), "" if hi is None else repr(float(hi))))
    return buf.getvalue()


def grid_csv_text(x, values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GRID_HEADER)
    for a, b in zip(np.asarray(x).tolist(), np.asarray(values).tolist()):
        w.writerow((repr(a), repr(b)))
    return buf.getvalue()


def write_text(text: str, path: str | Path | None) -> None:
    if path is None:
        return
    Path(path).write_text(text, encoding="utf-8")


def read_json(text_or_path: str):
    """Parse JSON given inline or as ``@path``."""
    if text_or_path.startswith("@"):
        text_or_path = Path(text_or_path[1:]).read_text(encoding="utf-8")
    return json.loads(text_or_path)
