"""Seeded synthetic benchmarks.

``generate_synthetic`` is the 2-D covariance-switching series; the failure
fixture is a synthetic stand-in for sensor data with a persistent mean shift.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .timeseries import TimeSeries


@dataclass(frozen=True)
class SyntheticSpec:
    num_segments: int = 10
    segment_len: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.num_segments < 2:
            raise ValueError("num_segments must be at least 2")
        if self.segment_len < 1:
            raise ValueError("segment_len must be positive")


@dataclass(frozen=True)
class FailureSpec:
    dim: int = 13
    normal_len: int = 30
    pre_anomaly_len: int = 60
    anomaly_len: int = 60
    shift: tuple = field(default=())
    noise_seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        for name in ("normal_len", "pre_anomaly_len", "anomaly_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        shift = tuple(float(s) for s in self.shift) or (0.0,) * self.dim
        if len(shift) != self.dim:
            raise ValueError(f"shift has {len(shift)} entries, expected {self.dim}")
        object.__setattr__(self, "shift", shift)

    @property
    def length(self) -> int:
        return self.normal_len + self.pre_anomaly_len + self.anomaly_len


def synthetic_covariance(N: int) -> np.ndarray:
    if N < 1:
        raise ValueError("segment index N starts at 1")
    rho = 4 / 5 + (N - 2) / 500
    if N % 2 == 1:
        rho = -rho
    return np.array([[1.0, rho], [rho, 1.0]])


def generate_synthetic(spec: SyntheticSpec) -> tuple[TimeSeries, list[int]]:
    """Returns the series (timestamps 0..T-1) and the change-points ``segment_len * k``."""
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.num_segments)
    blocks = []
    for N, ss in enumerate(seeds, start=1):
        chol = np.linalg.cholesky(synthetic_covariance(N))
        z = np.random.default_rng(ss).standard_normal((spec.segment_len, 2))
        blocks.append(z @ chol.T)
    series = TimeSeries.from_values(np.vstack(blocks))
    cps = [spec.segment_len * k for k in range(1, spec.num_segments)]
    return series, cps


@dataclass(frozen=True)
class FailureTruth:
    """Ground truth of a failure fixture, all as timestamps (inclusive)."""

    normal: tuple[int, int]
    anomaly: tuple[int, int]


def generate_failure_sequence(spec: FailureSpec) -> tuple[TimeSeries, FailureTruth]:
    rng = np.random.default_rng(spec.noise_seed)
    x = rng.standard_normal((spec.length, spec.dim))
    start = spec.normal_len + spec.pre_anomaly_len
    x[start:] += np.asarray(spec.shift)
    series = TimeSeries.from_values(x)
    truth = FailureTruth((0, spec.normal_len - 1), (start, spec.length - 1))
    return series, truth
