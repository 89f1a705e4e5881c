"""CSV and JSON sidecar serialization.

CSV layout: header ``timestamp,<col1>,...``; timestamps are integers or ISO-8601
dates; floats are written with 17 significant digits so they round-trip.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .detection import ScoreSeries
from .timeseries import TimeSeries


class DataError(ValueError):
    """Malformed or inconsistent input data."""


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def format_timestamp(t) -> str:
    if isinstance(t, np.datetime64):
        return str(np.datetime_as_string(t))
    return str(int(t))


def parse_timestamps(raw: list[str]) -> np.ndarray:
    try:
        return np.array([int(s) for s in raw], dtype=np.int64)
    except ValueError:
        pass
    try:
        return np.array(raw, dtype="datetime64")
    except ValueError as exc:
        raise DataError(f"timestamps are neither integers nor ISO-8601 dates: {exc}") from None


def parse_timestamp(s, like: np.ndarray):
    """Parse one timestamp to the same type as the array ``like``."""
    if like.dtype.kind == "M":
        return np.datetime64(str(s)).astype(like.dtype)
    return int(s)


def _write_rows(path, header, timestamps, columns):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, t in enumerate(timestamps):
            w.writerow([format_timestamp(t)] + [format_float(c[i]) for c in columns])


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if len(header) < 2 or header[0] != "timestamp":
        raise DataError(f"{path}: header must start with 'timestamp' and name at least one column")
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: line {lineno} has {len(row)} fields, expected {len(header)}")
    return header, body


def _floats(body, path):
    vals = np.empty((len(body), len(body[0]) - 1 if body else 0))
    for i, row in enumerate(body):
        try:
            vals[i] = [float(v) for v in row[1:]]
        except ValueError:
            raise DataError(f"{path}: line {i + 2} has a non-numeric value") from None
        if not np.all(np.isfinite(vals[i])):
            raise DataError(f"{path}: line {i + 2} has a non-finite value")
    return vals


def write_series(path, series: TimeSeries, prefix: str = "f") -> None:
    header = ["timestamp"] + [f"{prefix}{j + 1}" for j in range(series.dim)]
    _write_rows(path, header, series.timestamps, list(series.values.T))


def read_series(path) -> TimeSeries:
    header, body = _read_rows(path)
    if not body:
        raise DataError(f"{path}: no data rows")
    ts = parse_timestamps([r[0] for r in body])
    vals = _floats(body, path)
    try:
        return TimeSeries(ts, vals)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_scores(path, timestamps, columns: dict[str, np.ndarray]) -> None:
    _write_rows(path, ["timestamp"] + list(columns), timestamps, list(columns.values()))


def read_scores(path, column: str | None = None) -> ScoreSeries:
    header, body = _read_rows(path)
    if not body:
        raise DataError(f"{path}: no score rows")
    j = 1 if column is None else header.index(column) if column in header else -1
    if j < 1:
        raise DataError(f"{path}: no score column {column!r}")
    ts = parse_timestamps([r[0] for r in body])
    vals = _floats([[r[0], r[j]] for r in body], path)[:, 0]
    return ScoreSeries(ts, vals)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
