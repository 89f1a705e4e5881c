"""Unconstrained least-squares importance fitting (uLSIF).

Models ``r(x) = p(x) / p'(x)`` as a nonnegative combination of Gaussian bumps
centred on samples from ``p`` and plugs the fit into the Pearson divergence
estimate ``mean(g(x_i)) / 2 - 1/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class UlsifConfig:
    """``num_basis=None`` uses every p-sample as a centre.

    ``center_indices``, when given, overrides ``num_basis`` and picks those
    rows of the p-sample; otherwise the first ``num_basis`` rows are used.
    """

    scale: float = 1.0
    reg: float = 0.1
    num_basis: int | None = None
    center_indices: Sequence[int] | None = None

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if not self.reg > 0:
            raise ValueError("reg must be positive")
        if self.num_basis is not None and self.num_basis < 1:
            raise ValueError("num_basis must be at least 1")
        if self.center_indices is not None:
            idx = tuple(int(i) for i in self.center_indices)
            if not idx:
                raise ValueError("center_indices must not be empty")
            object.__setattr__(self, "center_indices", idx)


@dataclass(frozen=True)
class UlsifModel:
    centers: np.ndarray
    scale: float
    alpha: np.ndarray
    # solution of the linear system before clipping at zero
    alpha_raw: np.ndarray | None = None

    def __call__(self, x) -> np.ndarray:
        return evaluate(self, x)


def _as_samples(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty set of vectors")
    return x


def rbf(x, c, scale: float) -> float:
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    if x.shape != c.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {c.shape}")
    if not scale > 0:
        raise ValueError("scale must be positive")
    return float(np.exp(-np.sum((x - c) ** 2) / (2.0 * scale**2)))


def design_matrix(x: np.ndarray, centers: np.ndarray, scale: float) -> np.ndarray:
    """``K[i, j] = exp(-|x_i - c_j|^2 / (2 scale^2))``."""
    return np.exp(-cdist(x, centers, "sqeuclidean") / (2.0 * scale**2))


def select_centers(samples_p: np.ndarray, cfg: UlsifConfig) -> np.ndarray:
    n = samples_p.shape[0]
    if cfg.center_indices is not None:
        idx = np.asarray(cfg.center_indices)
        if idx.min() < 0 or idx.max() >= n:
            raise ValueError("center index outside the p-sample")
        return samples_p[idx]
    m = n if cfg.num_basis is None else cfg.num_basis
    if m > n:
        raise ValueError(f"num_basis={m} exceeds the {n} available p-samples")
    return samples_p[:m]


def normal_equations(samples_p, samples_q, centers, scale):
    """Empirical ``H`` (second moments under q) and ``h`` (first moments under p)."""
    kp = design_matrix(samples_p, centers, scale)
    kq = design_matrix(samples_q, centers, scale)
    H = kq.T @ kq / kq.shape[0]
    H = 0.5 * (H + H.T)
    h = kp.mean(axis=0)
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(h))):
        raise FloatingPointError("non-finite kernel sums")
    return H, h


def solve_alpha(H: np.ndarray, h: np.ndarray, reg: float) -> np.ndarray:
    a = H + reg * np.eye(H.shape[0])
    return scipy.linalg.cho_solve(scipy.linalg.cho_factor(a), h)


def fit(samples_p, samples_q, cfg: UlsifConfig) -> UlsifModel:
    xp = _as_samples(samples_p, "samples_p")
    xq = _as_samples(samples_q, "samples_q")
    if xp.shape[1] != xq.shape[1]:
        raise ValueError("samples_p and samples_q differ in dimension")
    centers = select_centers(xp, cfg)
    H, h = normal_equations(xp, xq, centers, cfg.scale)
    raw = solve_alpha(H, h, cfg.reg)
    return UlsifModel(centers.copy(), cfg.scale, np.maximum(raw, 0.0), raw)


def evaluate(model: UlsifModel, x) -> np.ndarray | float:
    """Fitted ratio at one point (returns float) or at each row of a 2-D array."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[1] != model.centers.shape[1]:
        raise ValueError("dimension mismatch with model centers")
    g = design_matrix(pts, model.centers, model.scale) @ model.alpha
    return float(g[0]) if single else g


def estimate_pe(model: UlsifModel, samples_p) -> float:
    xp = _as_samples(samples_p, "samples_p")
    return float(0.5 * np.mean(evaluate(model, xp)) - 0.5)


def pearson_divergence(samples_p, samples_q, cfg: UlsifConfig) -> float:
    return estimate_pe(fit(samples_p, samples_q, cfg), samples_p)
