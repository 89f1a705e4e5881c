"""Statevector simulation of the encoding circuits.

Qubits are 1-based and little-endian: qubit 1 is the least significant bit of
the amplitude index, so a single-qubit operator on qubit k embeds as
``I^(n-k) (x) sigma (x) I^(k-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

TWO_QUBIT_ROTATIONS = ("RXX", "RYY", "RZZ")
GATE_KINDS = TWO_QUBIT_ROTATIONS + ("RZ", "CX", "U1Q")


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "StateVector":
        """Computational basis state; bit k-1 of ``index`` is qubit k."""
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


@dataclass(frozen=True)
class Gate:
    """A single gate.

    ``qubits`` is ``(a, b)`` for RXX/RYY/RZZ, ``(control, target)`` for CX and
    ``(q,)`` for RZ and U1Q. Two-qubit rotations are ``exp(-i angle P(x)P)``
    with no halving of the angle; RZ follows the usual ``exp(-i angle Z / 2)``.
    """

    kind: str
    qubits: tuple
    angle: float = 0.0
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        arity = 2 if self.kind in TWO_QUBIT_ROTATIONS + ("CX",) else 1
        if len(qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit index in {qubits}")
        if any(q < 1 for q in qubits):
            raise ValueError("qubit indices are 1-based")
        if self.kind == "U1Q":
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2, 2) or not np.allclose(
                m.conj().T @ m, np.eye(2), atol=1e-10, rtol=0
            ):
                raise ValueError("U1Q matrix must be a 2x2 unitary")
            object.__setattr__(self, "matrix", m)

    def unitary(self) -> np.ndarray:
        """Local matrix; 4x4 gates are indexed by ``2*bit(qubits[0]) + bit(qubits[1])``."""
        if self.kind in TWO_QUBIT_ROTATIONS:
            p = PAULI[self.kind[1]]
            return np.cos(self.angle) * np.eye(4) - 1j * np.sin(self.angle) * np.kron(p, p)
        if self.kind == "RZ":
            return np.diag([np.exp(-0.5j * self.angle), np.exp(0.5j * self.angle)])
        if self.kind == "CX":
            return _CX
        return self.matrix


def rxx(angle, a, b):
    return Gate("RXX", (a, b), angle)


def ryy(angle, a, b):
    return Gate("RYY", (a, b), angle)


def rzz(angle, a, b):
    return Gate("RZZ", (a, b), angle)


def rz(angle, q):
    return Gate("RZ", (q,), angle)


def cx(control, target):
    return Gate("CX", (control, target))


def u1q(matrix, q):
    return Gate("U1Q", (q,), matrix=matrix)


@dataclass(frozen=True)
class CircuitSpec:
    n_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.qubits) > self.n_qubits:
                raise ValueError(f"gate {g.kind}{g.qubits} exceeds {self.n_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)


def _check_qubit(n_qubits, q):
    if not 1 <= q <= n_qubits:
        raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")


def _apply_local(psi: np.ndarray, n: int, u: np.ndarray, qubits) -> np.ndarray:
    # tensor axis of qubit k is n - k (C-order reshape puts the MSB first)
    axes = [n - q for q in qubits]
    k = len(qubits)
    t = np.moveaxis(psi.reshape((2,) * n), axes, range(k))
    shape = t.shape
    t = (u @ t.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(t, range(k), axes).reshape(-1)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    n = state.n_qubits
    for q in gate.qubits:
        _check_qubit(n, q)
    out = _apply_local(state.amplitudes, n, gate.unitary(), gate.qubits)
    return StateVector(n, out)


def run_circuit(circuit: CircuitSpec, initial: StateVector) -> StateVector:
    if circuit.n_qubits != initial.n_qubits:
        raise ValueError(
            f"circuit has {circuit.n_qubits} qubits, state has {initial.n_qubits}"
        )
    n = circuit.n_qubits
    psi = initial.amplitudes
    for g in circuit.gates:
        psi = _apply_local(psi, n, g.unitary(), g.qubits)
    return StateVector(n, psi)


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-distributed unitary from a Ginibre matrix via phase-corrected QR."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_single_qubit_states(n_qubits: int, seed: int) -> list[np.ndarray]:
    """Per-qubit states ``U_k|0>``, qubit 1 first."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    rng = np.random.default_rng(seed)
    return [haar_unitary(rng)[:, 0] for _ in range(n_qubits)]


def haar_random_initial_state(n_qubits: int, seed: int) -> StateVector:
    states = haar_single_qubit_states(n_qubits, seed)
    amps = np.ones(1, dtype=complex)
    for s in states:
        # later qubits are more significant
        amps = np.kron(s, amps)
    amps = amps / np.linalg.norm(amps)
    return StateVector(n_qubits, amps)


def _heisenberg_bonds(n_qubits):
    even = [(2 * i - 1, 2 * i, 2 * i - 1) for i in range(1, n_qubits // 2 + 1)]
    odd = [(2 * i, 2 * i + 1, 2 * i) for i in range(1, n_qubits // 2 + 1) if 2 * i + 1 <= n_qubits]
    return even, odd


def build_heisenberg_circuit(theta, t: float, p: int = 1) -> CircuitSpec:
    """Brick-wall XX/YY/ZZ circuit on ``len(theta) + 1`` qubits.

    Bond (2i-1, 2i) carries ``theta[2i-1]`` and bond (2i, 2i+1) carries
    ``theta[2i]`` (1-based). Each layer is emitted in application order:
    ZZ, YY, XX on even bonds, then ZZ, YY, XX on odd bonds.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    d = theta.size
    if d < 1:
        raise ValueError("theta must have at least one entry")
    if p < 1:
        raise ValueError("p must be positive")
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    n = d + 1
    even, odd = _heisenberg_bonds(n)
    layer = []
    for bonds in (even, odd):
        for kind in ("RZZ", "RYY", "RXX"):
            for a, b, j in bonds:
                layer.append(Gate(kind, (a, b), float(t * theta[j - 1])))
    return CircuitSpec(n, tuple(layer) * p)


def build_two_local_circuit(theta, p: int = 1) -> CircuitSpec:
    """RZ(theta_k) on qubits 1..d followed by a linear CX chain, repeated p times."""
    theta = np.asarray(theta, dtype=float).ravel()
    d = theta.size
    if d < 1:
        raise ValueError("theta must have at least one entry")
    if p < 1:
        raise ValueError("p must be positive")
    n = d + 1
    layer = [rz(float(theta[k]), k + 1) for k in range(d)]
    layer += [cx(k, k + 1) for k in range(1, n)]
    return CircuitSpec(n, tuple(layer) * p)


def _split(psi, n, qubit):
    # amplitudes with qubit k at 0 / 1, shape (2^(n-k), 2^(k-1))
    t = psi.reshape(2 ** (n - qubit), 2, 2 ** (qubit - 1))
    return t[:, 0, :], t[:, 1, :]


def pauli_expectation(state: StateVector, qubit: int, pauli: str) -> float:
    n = state.n_qubits
    _check_qubit(n, qubit)
    a0, a1 = _split(state.amplitudes, n, qubit)
    if pauli == "Z":
        return float(np.vdot(a0, a0).real - np.vdot(a1, a1).real)
    if pauli == "X":
        return float(2.0 * np.vdot(a0, a1).real)
    if pauli == "Y":
        return float(2.0 * np.vdot(a0, a1).imag)
    raise ValueError(f"pauli must be one of X, Y, Z, got {pauli!r}")


def all_pauli_expectations(state: StateVector) -> np.ndarray:
    """Array of shape (n_qubits, 3) with <X>, <Y>, <Z> per qubit."""
    out = np.empty((state.n_qubits, 3))
    for k in range(1, state.n_qubits + 1):
        for i, s in enumerate("XYZ"):
            out[k - 1, i] = pauli_expectation(state, k, s)
    return out


def reduced_density_matrix(state: StateVector, qubit: int) -> np.ndarray:
    """One-qubit marginal ``Tr_{j != qubit} |psi><psi|`` as a 2x2 array."""
    n = state.n_qubits
    _check_qubit(n, qubit)
    t = state.amplitudes.reshape(2 ** (n - qubit), 2, 2 ** (qubit - 1))
    return np.einsum("aib,ajb->ij", t, t.conj())


def circuit_unitary(circuit: CircuitSpec) -> np.ndarray:
    """Dense 2^n x 2^n unitary of the whole circuit (small n only)."""
    n = circuit.n_qubits
    total = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        total = embed(g, n) @ total
    return total


def _kron_all(ops):
    out = np.ones((1, 1), dtype=complex)
    for o in ops:
        out = np.kron(out, o)
    return out


def embed_single(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """``I^(n-k) (x) op (x) I^(k-1)``."""
    ops = [np.eye(2)] * n
    ops[n - qubit] = op
    return _kron_all(ops)


def embed(gate: Gate, n: int) -> np.ndarray:
    """Full-register matrix of a gate, built from Kronecker products."""
    if gate.kind in TWO_QUBIT_ROTATIONS:
        p = PAULI[gate.kind[1]]
        a, b = gate.qubits
        pp = embed_single(p, a, n) @ embed_single(p, b, n)
        return np.cos(gate.angle) * np.eye(2**n) - 1j * np.sin(gate.angle) * pp
    if gate.kind == "CX":
        c, t = gate.qubits
        p0 = embed_single(np.diag([1.0, 0.0]), c, n)
        p1 = embed_single(np.diag([0.0, 1.0]), c, n)
        return p0 + p1 @ embed_single(PAULI["X"], t, n)
    return embed_single(gate.unitary(), gate.qubits[0], n)
