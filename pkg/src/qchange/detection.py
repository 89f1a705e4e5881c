"""Sliding windows and divergence-based scoring."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .timeseries import TimeSeries
from .ulsif import UlsifConfig, pearson_divergence


@dataclass(frozen=True)
class WindowSpec:
    length: int
    slide: int = 1

    def __post_init__(self):
        if self.length < 1 or self.slide < 1:
            raise ValueError("window length and slide must be positive")


class Window(NamedTuple):
    """Window ``s`` covering 1-based positions ``first..last`` (inclusive)."""

    s: int
    first: int
    last: int

    @property
    def rows(self) -> slice:
        return slice(self.first - 1, self.last)


@dataclass(frozen=True)
class NormalPeriod:
    start: object
    end: object

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError("normal period ends before it starts")


@dataclass(frozen=True)
class ScoreSeries:
    timestamps: np.ndarray
    scores: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        ts = np.asarray(self.timestamps)
        sc = np.asarray(self.scores, dtype=float)
        if ts.shape != sc.shape or sc.ndim != 1:
            raise ValueError("timestamps and scores must be 1-D and of equal length")
        if ts.size > 1 and not np.all(ts[1:] > ts[:-1]):
            raise ValueError("score timestamps must be strictly increasing")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "scores", sc)

    def __len__(self):
        return self.scores.size

    def normalize(self) -> "ScoreSeries":
        """Divide by the maximum score."""
        top = self.scores.max()
        if not top > 0:
            raise ValueError("cannot normalize: maximum score is not positive")
        return ScoreSeries(self.timestamps, self.scores / top, normalized=True)

    def after(self, t) -> "ScoreSeries":
        keep = self.timestamps > t
        return ScoreSeries(self.timestamps[keep], self.scores[keep], self.normalized)


def make_windows(n_rows: int, spec: WindowSpec) -> list[Window]:
    """Windows ``[s*w, s*w + L]`` for s = 1, 2, ... while they fit in ``n_rows``."""
    if isinstance(n_rows, TimeSeries):
        n_rows = len(n_rows)
    L, w = spec.length, spec.slide
    count = (n_rows - L) // w if n_rows > L else 0
    if count < 1:
        raise ValueError(
            f"series of length {n_rows} holds no window of length {L} with slide {w}"
        )
    return [Window(s, s * w, s * w + L) for s in range(1, count + 1)]


def anomaly_scores(
    series: TimeSeries, normal: NormalPeriod, spec: WindowSpec, cfg: UlsifConfig
) -> ScoreSeries:
    """Divergence of every window from the normal period, stamped at window end."""
    mask = series.rows_between(normal.start, normal.end)
    if not mask.any():
        raise ValueError("normal period contains no rows")
    ref = series.values[mask]
    windows = make_windows(len(series), spec)
    scores = [pearson_divergence(ref, series.values[win.rows], cfg) for win in windows]
    ends = series.timestamps[[win.last - 1 for win in windows]]
    return ScoreSeries(ends, np.array(scores))


def change_scores(
    series: TimeSeries, length: int, cfg: UlsifConfig, stamp: str = "junction"
) -> ScoreSeries:
    """Divergence between ``X_s`` and ``X_{s-L}`` with slide 1.

    Centres are drawn from the current window ``X_s``. ``stamp="junction"``
    labels each score with the position shared by both windows (where a
    change sitting between them is located); ``stamp="end"`` uses the end of
    ``X_s`` instead.
    """
    if stamp not in ("junction", "end"):
        raise ValueError("stamp must be 'junction' or 'end'")
    T, L = len(series), length
    if L < 1:
        raise ValueError("window length must be positive")
    if T < 2 * L + 1:
        raise ValueError(f"series of length {T} too short for window length {L}")
    x = series.values
    scores, pos = [], []
    for s in range(L + 1, T - L + 1):
        cur = x[s - 1 : s + L]
        prev = x[s - L - 1 : s]
        scores.append(pearson_divergence(cur, prev, cfg))
        pos.append(s - 1 if stamp == "junction" else s + L - 1)
    return ScoreSeries(series.timestamps[pos], np.array(scores))


def threshold_from_warmup(scores: ScoreSeries, k: int = 7, multiplier: float = 3.0) -> float:
    if k < 1 or not multiplier > 0:
        raise ValueError("k and multiplier must be positive")
    if len(scores) < k:
        raise ValueError(f"need {k} warm-up scores, got {len(scores)}")
    return float(multiplier * np.mean(scores.scores[:k]))


def detect(scores: ScoreSeries, threshold: float) -> np.ndarray:
    return scores.timestamps[scores.scores > threshold]
