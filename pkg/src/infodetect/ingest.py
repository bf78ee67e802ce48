"""Tick CSV parsing, day slicing and spot/futures pairing.

File format: UTF-8 CSV with a header row, comma or semicolon delimited (taken
from the header line), columns ``timestamp,price[,volume]`` by default.
Timestamps are epoch milliseconds or ISO-8601; naive ISO stamps are read in
the schema's timezone.  Prices must use a decimal point.
"""

from __future__ import annotations

import csv
import json
import re
import warnings
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from zoneinfo import ZoneInfo

import numpy as np

from .errors import EmptyInputError, TickOrderWarning, TickParseError

_DURATION = re.compile(r"^\s*(\d+(?:\.\d*)?)\s*(ms|s|sec|m|min|h|d)\s*$")
_UNIT_MS = {"ms": 1, "s": 1000, "sec": 1000, "m": 60_000, "min": 60_000, "h": 3_600_000, "d": 86_400_000}


def parse_duration(value) -> int:
    """Duration in milliseconds from ``'1h'``, ``'15m'``, ``'30s'``, a ``timedelta`` or an int (ms)."""
    if isinstance(value, timedelta):
        ms = value / timedelta(milliseconds=1)
    elif isinstance(value, (int, float, np.integer, np.floating)):
        ms = float(value)
    else:
        m = _DURATION.match(str(value))
        if not m:
            raise ValueError(f"cannot parse duration {value!r}")
        ms = float(m.group(1)) * _UNIT_MS[m.group(2)]
    if ms <= 0 or ms != int(ms):
        raise ValueError(f"duration must be a positive whole number of milliseconds, got {value!r}")
    return int(ms)


@dataclass
class TickSeries:
    instrument: str
    timestamps: np.ndarray  # int64 epoch milliseconds, UTC
    prices: np.ndarray
    day: date | None = None

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=np.int64)
        self.prices = np.asarray(self.prices, dtype=float)
        if self.timestamps.shape != self.prices.shape or self.prices.ndim != 1:
            raise ValueError("timestamps and prices must be 1-d and of equal length")
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0):
            raise ValueError(f"{self.instrument}: prices must be finite and positive")
        if np.any(np.diff(self.timestamps) < 0):
            raise ValueError(f"{self.instrument}: timestamps must be sorted")

    def __len__(self):
        return len(self.prices)

    def slice(self, i0, i1, day=None) -> "TickSeries":
        return TickSeries(self.instrument, self.timestamps[i0:i1], self.prices[i0:i1], day)


@dataclass
class TickSchema:
    timestamp_col: str = "timestamp"
    price_col: str = "price"
    volume_col: str | None = None
    timestamp_format: str = "auto"  # auto | epoch_ms | iso | strptime pattern
    timezone: str = "UTC"
    delimiter: str | None = None

    @classmethod
    def load(cls, file) -> "TickSchema":
        with open(file, encoding="utf-8") as fh:
            return cls(**json.load(fh))


@dataclass
class DaySlice:
    day: date
    series: TickSeries
    sparse: bool = False


@dataclass
class PairedDay:
    day: date
    spot: TickSeries
    futures: TickSeries
    notes: list[str] = field(default_factory=list)


def _to_ms(text: str, fmt: str, tz) -> int:
    text = text.strip()
    if fmt in ("auto", "epoch_ms") and re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    if fmt == "epoch_ms":
        raise ValueError(f"not an epoch-millisecond timestamp: {text!r}")
    if fmt in ("auto", "iso"):
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        dt = datetime.fromisoformat(text)
    else:
        dt = datetime.strptime(text, fmt)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=tz)
    delta = dt - datetime(1970, 1, 1, tzinfo=timezone.utc)
    return delta // timedelta(milliseconds=1)


def parse_ticks(file, schema: TickSchema | None = None, instrument: str | None = None) -> TickSeries:
    """Read a tick file into a validated :class:`TickSeries`.

    Out-of-order rows are stably sorted and reported with a
    :class:`TickOrderWarning`; duplicate timestamps are kept.
    """
    schema = schema or TickSchema()
    file = Path(file)
    tz = ZoneInfo(schema.timezone)
    with file.open(encoding="utf-8", newline="") as fh:
        header = fh.readline()
        if not header.strip():
            raise EmptyInputError(f"{file}: empty file")
        delim = schema.delimiter or (";" if header.count(";") > header.count(",") else ",")
        cols = [c.strip() for c in next(csv.reader([header], delimiter=delim))]
        try:
            ti, pi = cols.index(schema.timestamp_col), cols.index(schema.price_col)
        except ValueError:
            raise TickParseError(
                f"header {cols} lacks '{schema.timestamp_col}' or '{schema.price_col}'", line=1, path=file
            ) from None
        stamps, prices = [], []
        for lineno, row in enumerate(csv.reader(fh, delimiter=delim), start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                stamps.append(_to_ms(row[ti], schema.timestamp_format, tz))
                price = float(row[pi])
            except (ValueError, IndexError) as exc:
                raise TickParseError(f"bad row {row!r}: {exc}", line=lineno, path=file) from None
            if not np.isfinite(price) or price <= 0:
                raise TickParseError(f"price must be finite and positive, got {row[pi]!r}", line=lineno, path=file)
            prices.append(price)
    if not prices:
        raise EmptyInputError(f"{file}: no tick rows")
    ts = np.asarray(stamps, dtype=np.int64)
    px = np.asarray(prices, dtype=float)
    n_bad = int(np.count_nonzero(np.diff(ts) < 0))
    if n_bad:
        order = np.argsort(ts, kind="stable")
        ts, px = ts[order], px[order]
        warnings.warn(f"{file}: {n_bad} out-of-order rows sorted", TickOrderWarning, stacklevel=2)
    return TickSeries(instrument or file.stem, ts, px)


def _local_midnight_ms(d: date, tz) -> int:
    dt = datetime.combine(d, time(0), tzinfo=tz)
    return (dt - datetime(1970, 1, 1, tzinfo=timezone.utc)) // timedelta(milliseconds=1)


def slice_days(series: TickSeries, tz: str = "UTC", min_ticks: int = 51) -> list[DaySlice]:
    """Partition by calendar day in ``tz``.  A tick exactly at midnight opens the later day."""
    if len(series) == 0:
        return []
    zone = ZoneInfo(tz)
    out = []
    ts = series.timestamps
    i = 0
    while i < len(ts):
        first = datetime.fromtimestamp(ts[i] / 1000, tz=timezone.utc).astimezone(zone)
        day = first.date()
        end_ms = _local_midnight_ms(day + timedelta(days=1), zone)
        j = int(np.searchsorted(ts, end_ms, side="left"))
        part = series.slice(i, j, day)
        out.append(DaySlice(day, part, len(part) < min_ticks))
        i = j
    return out


def pair_days(spot: TickSeries, futures: TickSeries, tz: str = "UTC", min_ticks: int = 51) -> list[PairedDay]:
    """Days present in both legs, in calendar order; one-legged days are dropped."""
    s = {d.day: d for d in slice_days(spot, tz, min_ticks)}
    f = {d.day: d for d in slice_days(futures, tz, min_ticks)}
    out = []
    for day in sorted(s.keys() & f.keys()):
        notes = [f"{leg} has fewer than {min_ticks} ticks" for leg, d in (("spot", s[day]), ("futures", f[day])) if d.sparse]
        out.append(PairedDay(day, s[day].series, f[day].series, notes))
    return out
