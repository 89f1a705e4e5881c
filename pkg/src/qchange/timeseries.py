from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """Timestamps (int index or ``datetime64[D]``) with a (T, d) value matrix."""

    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps)
        if ts.dtype.kind not in "iuM":
            raise TypeError(f"timestamps must be integers or dates, got dtype {ts.dtype}")
        if ts.dtype.kind == "u":
            ts = ts.astype(np.int64)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if values.shape[1] < 1:
            raise ValueError("series dimension must be at least 1")
        if ts.shape != (values.shape[0],):
            raise ValueError(
                f"{ts.shape[0] if ts.ndim else 0} timestamps for {values.shape[0]} rows"
            )
        if ts.size > 1 and not np.all(ts[1:] > ts[:-1]):
            raise ValueError("timestamps must be strictly increasing")
        bad = ~np.isfinite(values)
        if bad.any():
            row = int(np.argwhere(bad)[0, 0])
            raise ValueError(f"non-finite value in row {row}")
        ts.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, start: int = 0) -> "TimeSeries":
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        return cls(np.arange(start, start + values.shape[0], dtype=np.int64), values)

    @classmethod
    def empty(cls, dim: int, date_index: bool = False) -> "TimeSeries":
        ts = np.array([], dtype="datetime64[D]" if date_index else np.int64)
        return cls(ts, np.empty((0, dim)))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def has_dates(self) -> bool:
        return self.timestamps.dtype.kind == "M"

    def __len__(self):
        return self.values.shape[0]

    def rows_between(self, t1, t2) -> np.ndarray:
        """Boolean mask of rows with ``t1 <= timestamp <= t2``."""
        return (self.timestamps >= t1) & (self.timestamps <= t2)

    def slice(self, start: int, stop: int) -> "TimeSeries":
        return TimeSeries(self.timestamps[start:stop], self.values[start:stop])

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.timestamps.dtype == other.timestamps.dtype
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None
