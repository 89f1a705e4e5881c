"""Scoring metrics: AUC, false alerts, detection time, peaks and PCA."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks
from scipy.stats import rankdata

from .detection import ScoreSeries
from .timeseries import TimeSeries

NOT_DETECTED = "not_detected"


@dataclass(frozen=True)
class LabeledScores:
    """Scores plus an inclusive anomaly interval; a window is positive iff its end is inside."""

    scores: ScoreSeries
    anomaly_start: object
    anomaly_end: object

    @property
    def labels(self) -> np.ndarray:
        ts = self.scores.timestamps
        return (ts >= self.anomaly_start) & (ts <= self.anomaly_end)


@dataclass(frozen=True)
class EvalReport:
    auc: float
    false_alerts: int
    detection_time: object
    threshold: float


def roc_auc(labeled: LabeledScores) -> float:
    """Mann-Whitney estimate of P(score_pos > score_neg), ties counted as 1/2."""
    y = labeled.labels
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both positive and negative windows")
    ranks = rankdata(labeled.scores.scores)
    u = ranks[y].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def count_false_alerts(labeled: LabeledScores, threshold: float) -> int:
    s = labeled.scores
    pre = s.timestamps < labeled.anomaly_start
    return int(np.count_nonzero(pre & (s.scores > threshold)))


def detection_time(labeled: LabeledScores, threshold: float):
    s = labeled.scores
    hit = (s.timestamps >= labeled.anomaly_start) & (s.scores > threshold)
    if not hit.any():
        return NOT_DETECTED
    return s.timestamps[np.argmax(hit)]


def evaluate_scores(labeled: LabeledScores, threshold: float) -> EvalReport:
    return EvalReport(
        auc=roc_auc(labeled),
        false_alerts=count_false_alerts(labeled, threshold),
        detection_time=detection_time(labeled, threshold),
        threshold=float(threshold),
    )


def find_peaks(scores: ScoreSeries, min_prominence: float) -> np.ndarray:
    """Timestamps of local maxima with topographic prominence >= ``min_prominence``."""
    idx, _ = _scipy_find_peaks(scores.scores, prominence=min_prominence)
    return scores.timestamps[idx]


def peak_alignment(peaks, truth, tol) -> int:
    """Number of true change-points with at least one peak within ``tol``."""
    peaks = np.asarray(peaks)
    if peaks.size == 0:
        return 0
    return sum(bool(np.any(np.abs(peaks - cp) <= tol)) for cp in truth)


@dataclass(frozen=True)
class PCA:
    mean: np.ndarray
    components: np.ndarray  # (k, d), rows are principal axes
    variances: np.ndarray

    def transform(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) @ self.components.T


def pca_fit(reference: np.ndarray, k: int) -> PCA:
    reference = np.asarray(reference, dtype=float)
    n, d = reference.shape
    if k < 1 or k > d:
        raise ValueError(f"k must lie in [1, {d}]")
    if n < 2:
        raise ValueError("reference needs at least two rows")
    mean = reference.mean(axis=0)
    evals, evecs = np.linalg.eigh(np.cov(reference, rowvar=False).reshape(d, d))
    order = np.argsort(evals)[::-1][:k]
    comps = evecs[:, order].T
    # largest-magnitude entry of each axis is positive
    flip = np.sign(comps[np.arange(k), np.argmax(np.abs(comps), axis=1)])
    comps = comps * flip[:, None]
    return PCA(mean, comps, evals[order])


def pca_fit_project(reference: TimeSeries, target: TimeSeries, k: int) -> TimeSeries:
    pca = pca_fit(reference.values, k)
    return TimeSeries(target.timestamps, pca.transform(target.values))
