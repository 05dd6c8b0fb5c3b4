"""Text formats: result CSV, series files, columnar data and flat configs."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
import yaml

from ..lmcore import Series
from .experiment import ExperimentConfig, ResultRow

TABLE_HEADER = ("transform", "n", "estimator", "setting", "mean", "se", "q025", "q50", "q975", "L")


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))


def format_table(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    for r in rows:
        w.writerow([r.transform, r.n, r.estimator, r.setting, _fmt(r.mean), _fmt(r.se),
                    _fmt(r.q025), _fmt(r.q50), _fmt(r.q975), r.replicates])
    return buf.getvalue()


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def emit_table(rows, path) -> None:
    """Write result rows as CSV; byte output depends only on the rows."""
    _write_text(path, format_table(rows))


def parse_table(text: str) -> list[ResultRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != TABLE_HEADER:
        raise ValueError(f"unexpected table header {header}")
    rows = []
    for rec in reader:
        t, n, est, setting, *stats, L = rec
        rows.append(ResultRow(t, int(n), est, setting, *(float(s) for s in stats), int(L)))
    return rows


def read_table(path) -> list[ResultRow]:
    return parse_table(_read_text(path))


def format_series(series: Series) -> str:
    head = "# " + json.dumps(series.meta, sort_keys=True) + "\n"
    return head + "".join(repr(float(v)) + "\n" for v in series.values)


def parse_series(text: str) -> Series:
    meta: dict = {}
    values = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body:
                meta.update(json.loads(body))
            continue
        values.append(float(line))
    return Series(np.array(values), meta)


def write_series(series: Series, path) -> None:
    _write_text(path, format_series(series))


def read_series(path) -> Series:
    return parse_series(_read_text(path))


def format_columns(columns: dict) -> str:
    """Equal-length columns as CSV, floats in repr form."""
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    lengths = {a.size for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for i in range(arrays[0].size if arrays else 0):
        w.writerow([_cell(a[i]) for a in arrays])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    if isinstance(v, (np.floating, float)):
        return _fmt(float(v))
    return str(v)


def write_columns(columns: dict, path) -> None:
    _write_text(path, format_columns(columns))


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Flat YAML mapping of ExperimentConfig fields; ``overrides`` win."""
    data = yaml.safe_load(_read_text(path)) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a key-value mapping")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return ExperimentConfig.from_dict(data)
