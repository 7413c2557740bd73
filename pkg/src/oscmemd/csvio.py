"""CSV ingestion and export of multichannel records.

Format: a header ``time,<id1>,<id2>,...`` followed by one row per sample;
time in seconds, comma separated, ``.`` as decimal point. Data values are
written with 17 significant digits so that a write/read round trip returns
the same doubles.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .exceptions import NonFiniteError, NonUniformSamplingError, ParseError, WriteError
from .records import MultichannelRecord

SAMPLING_TOLERANCE = 1e-6


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def ingest_csv(path) -> MultichannelRecord:
    """Read a record; the sample rate comes from the median time step.

    Raises
    ------
    ParseError
        Missing header, ragged row, blank or non-numeric cell (the 1-based
        file row and column are reported).
    NonUniformSamplingError
        A time step deviates from the median by more than 1e-6 relative.
    NonFiniteError
        A NaN or infinite value.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError("empty file", row=1)
    header = [h.strip() for h in rows[0]]
    if len(header) < 2:
        raise ParseError("header needs a time column and at least one channel", row=1)
    width = len(header)
    values = np.empty((len(rows) - 1, width))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", row=r)
        for c, cell in enumerate(row, start=1):
            text = cell.strip()
            try:
                values[r - 2, c - 1] = float(text)
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", row=r, column=c) from None
    bad = ~np.isfinite(values)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise NonFiniteError(f"non-finite value at row {r + 2}, column {c + 1}")
    time = values[:, 0]
    if time.size < 2:
        raise ParseError("need at least two samples")
    dt = np.diff(time)
    step = float(np.median(dt))
    if not step > 0:
        raise NonUniformSamplingError(f"median time step {step} is not positive")
    off = np.flatnonzero(np.abs(dt - step) > SAMPLING_TOLERANCE * step)
    if off.size:
        i = int(off[0])
        raise NonUniformSamplingError(
            f"time step {dt[i]!r} at row {i + 3} deviates from the median {step!r}"
        )
    rate = float(f"{1.0 / step:.12g}")
    return MultichannelRecord(values[:, 1:].T, rate, tuple(header[1:]), float(time[0]))


def write_csv(record: MultichannelRecord, path) -> None:
    """Write ``record`` in the ingest format."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["time", *record.channel_ids])
            for t, col in zip(record.time, record.data.T):
                w.writerow([_fmt(t), *map(_fmt, col)])
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def write_table(path, header, columns) -> None:
    """Write equal-length columns as CSV; NaN is written as ``nan``."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in zip(*columns):
                w.writerow(["nan" if math.isnan(v) else _fmt(v) for v in row])
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc
