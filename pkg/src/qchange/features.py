"""Projected quantum features: per-qubit Pauli coefficients of the encoded state."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantum_sim import (
    StateVector,
    all_pauli_expectations,
    build_heisenberg_circuit,
    build_two_local_circuit,
    haar_random_initial_state,
    run_circuit,
)
from .timeseries import TimeSeries

FAMILIES = ("heisenberg", "two_local")


@dataclass(frozen=True)
class EncodingConfig:
    circuit_family: str = "heisenberg"
    t: float = 0.5
    p: int = 1
    init_seed: int = 0

    def __post_init__(self):
        if self.circuit_family not in FAMILIES:
            raise ValueError(f"circuit_family must be one of {FAMILIES}")
        if self.p < 1:
            raise ValueError("p must be a positive integer")
        if self.circuit_family == "heisenberg" and not self.t > 0:
            raise ValueError("t must be positive for the Heisenberg circuit")


@dataclass(frozen=True)
class FeatureBackend:
    """``shots=None`` is exact simulation; otherwise binomial shot sampling."""

    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be at least 1")

    @property
    def exact(self) -> bool:
        return self.shots is None


EXACT = FeatureBackend()


def encode_angles(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite entries")
    return np.arctan(x)


def build_circuit(theta, cfg: EncodingConfig):
    if cfg.circuit_family == "heisenberg":
        return build_heisenberg_circuit(theta, cfg.t, cfg.p)
    return build_two_local_circuit(theta, cfg.p)


def row_rng(seed: int, row: int) -> np.random.Generator:
    """Sampling stream for one row: ``SeedSequence([seed, row])`` into PCG64."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(row)]))


def sample_expectations(expectations, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Estimate each <sigma> from ``shots`` independent +-1 outcomes."""
    prob = np.clip((1.0 + np.asarray(expectations)) / 2.0, 0.0, 1.0)
    successes = rng.binomial(shots, prob)
    return 2.0 * successes / shots - 1.0


def features_from_state(
    state: StateVector, backend: FeatureBackend = EXACT, row: int = 0
) -> np.ndarray:
    """Flattened ``(c_{1,X}, c_{1,Y}, c_{1,Z}, c_{2,X}, ...)`` with ``c = <sigma>/2``."""
    ev = all_pauli_expectations(state).ravel()
    if not backend.exact:
        ev = sample_expectations(ev, backend.shots, row_rng(backend.seed, row))
    return 0.5 * ev


def project(x, cfg: EncodingConfig, backend: FeatureBackend = EXACT, row: int = 0) -> np.ndarray:
    theta = encode_angles(np.ravel(x))
    circuit = build_circuit(theta, cfg)
    init = haar_random_initial_state(circuit.n_qubits, cfg.init_seed)
    return features_from_state(run_circuit(circuit, init), backend, row)


def transform_series(
    series: TimeSeries, cfg: EncodingConfig, backend: FeatureBackend = EXACT
) -> TimeSeries:
    """Map every row to its projected features; row ``t`` uses ``row_rng(seed, t)`` for shots."""
    d = series.dim
    out = np.empty((len(series), 3 * (d + 1)))
    init = haar_random_initial_state(d + 1, cfg.init_seed)
    for t, x in enumerate(series.values):
        circuit = build_circuit(encode_angles(x), cfg)
        out[t] = features_from_state(run_circuit(circuit, init), backend, t)
    return TimeSeries(series.timestamps, out)
