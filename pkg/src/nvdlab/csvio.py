"""Comma-separated output with round-trip float formatting."""

from __future__ import annotations

import csv
import io
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


@contextmanager
def _open(target):
    if target is None or target == "-":
        yield sys.stdout
    elif isinstance(target, io.IOBase) or hasattr(target, "write"):
        yield target
    else:
        path = Path(target)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            yield fh


def write_rows(target, header, rows) -> None:
    """Write ``header`` and an iterable of row tuples (LF line endings)."""
    with _open(target) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_columns(target, columns: dict) -> None:
    """Write equal-length column arrays keyed by header name."""
    header = list(columns)
    data = [np.asarray(columns[k]) for k in header]
    write_rows(target, header, zip(*data))


def read_columns(source) -> dict:
    """Read a file written by ``write_columns``.

    Numeric columns come back as float arrays with empty cells as NaN; a
    column holding any other text comes back as a string array.
    """
    with open(source, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for j, name in enumerate(header):
        cells = [r[j] for r in body]
        try:
            out[name] = np.array([float(c) if c != "" else np.nan for c in cells])
        except ValueError:
            out[name] = np.array(cells, dtype=str)
    return out


def with_suffix_tag(path, tag: str) -> Path:
    """``out/run.csv`` + ``t0.5`` -> ``out/run_t0.5.csv``."""
    p = Path(path)
    stem, suffix = os.path.splitext(p.name)
    return p.with_name(f"{stem}_{tag}{suffix or '.csv'}")
