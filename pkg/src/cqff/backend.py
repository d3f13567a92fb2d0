"""
Emulated quantum processor.

States are plain complex numpy arrays in big-endian order (qubit 0 is the
most significant bit of the basis index). The only thing the fast-forwarding
pipeline asks of this module is <phi|P|phi> for canonical Pauli strings,
either exactly or by sampling measurement shots in a rotated basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ContractError, DimensionError
from .hamiltonian import HamiltonianSpec
from .pauli import PauliString

DENSE_QUBIT_LIMIT = 12
DEFAULT_SHOTS = 8192

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
# H S^dag maps the Y eigenbasis onto the computational basis
_BASIS_CHANGE = {"X": _H, "Y": _H @ _SDG, "Z": None}
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@dataclass(frozen=True)
class EstimatorConfig:
    mode: Literal["exact", "sampled"] = "exact"
    shots: int = DEFAULT_SHOTS
    rng_seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown estimator mode {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled mode needs at least one shot")

    def to_json(self) -> dict:
        return {"mode": self.mode, "shots": self.shots, "seed": self.rng_seed}


EXACT = EstimatorConfig()


def n_qubits_of(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise DimensionError(f"state dimension {dim} is not a power of two")
    return n


def apply_1q(state: np.ndarray, gate: np.ndarray, qubit: int) -> np.ndarray:
    n = n_qubits_of(state)
    psi = state.reshape((2,) * n)
    psi = np.tensordot(gate, psi, axes=([1], [qubit]))
    return np.moveaxis(psi, 0, qubit).reshape(-1)


def apply_2q(state: np.ndarray, gate: np.ndarray, q0: int, q1: int) -> np.ndarray:
    n = n_qubits_of(state)
    psi = state.reshape((2,) * n)
    g = gate.reshape(2, 2, 2, 2)
    psi = np.tensordot(g, psi, axes=([2, 3], [q0, q1]))
    return np.moveaxis(psi, [0, 1], [q0, q1]).reshape(-1)


def _su2(theta: float, phi: float, lam: float) -> np.ndarray:
    # general single-qubit rotation, same parametrisation as the U3 gate
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]]
    )


def prepare_layered_random_state(n_qubits: int, n_layers: int = 5, rng_seed: int = 0) -> np.ndarray:
    """
    Random entangled state from `n_layers` rounds of gates on |0...0>.

    Each round applies an independent SU(2) rotation to every qubit, with the
    three Euler angles drawn uniformly from [0, 2pi), then a CNOT ladder
    (control k, target k+1).
    """
    if n_qubits < 1 or n_layers < 0:
        raise ValueError("need n_qubits >= 1 and n_layers >= 0")
    rng = np.random.default_rng(rng_seed)
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[0] = 1.0
    for _ in range(n_layers):
        angles = rng.uniform(0.0, 2 * np.pi, size=(n_qubits, 3))
        for q in range(n_qubits):
            state = apply_1q(state, _su2(*angles[q]), q)
        for q in range(n_qubits - 1):
            state = apply_2q(state, _CNOT, q, q + 1)
    return state / np.linalg.norm(state)


def prepare_basis_state(bitstring: str) -> np.ndarray:
    if not bitstring or set(bitstring) - {"0", "1"}:
        raise ValueError(f"basis label must be a non-empty string of 0/1, got {bitstring!r}")
    state = np.zeros(1 << len(bitstring), dtype=complex)
    state[int(bitstring, 2)] = 1.0
    return state


def _check_dims(p: PauliString, state: np.ndarray):
    if state.ndim != 1 or state.shape[0] != 1 << p.n_qubits:
        raise DimensionError(
            f"{p.n_qubits}-qubit Pauli string applied to a state of shape {state.shape}"
        )


def apply_pauli(p: PauliString, state: np.ndarray) -> np.ndarray:
    """P|state>, including the global phase of P."""
    _check_dims(p, state)
    idx = np.arange(state.shape[0])
    signs = 1 - 2 * (np.bitwise_count(idx & p.z_bits).astype(np.int64) & 1)
    coeff = p.phase * (1j) ** bin(p.x_bits & p.z_bits).count("1")
    out = np.empty_like(state, dtype=complex)
    out[idx ^ p.x_bits] = coeff * signs * state
    return out


def _stream(cfg: EstimatorConfig, p: PauliString) -> np.random.Generator:
    # one independent stream per (seed, string) so results do not depend on call order
    return np.random.default_rng([cfg.rng_seed, p.n_qubits, p.x_bits, p.z_bits])


def measurement_distribution(state: np.ndarray, p: PauliString) -> np.ndarray:
    """Outcome probabilities after rotating every support qubit into the eigenbasis of its letter."""
    rotated = state
    for q, letter in p.letters().items():
        gate = _BASIS_CHANGE[letter]
        if gate is not None:
            rotated = apply_1q(rotated, gate, q)
    probs = np.abs(rotated) ** 2
    return probs / probs.sum()


def expectation(state: np.ndarray, p: PauliString, cfg: EstimatorConfig = EXACT) -> float:
    """
    Estimate <state|p|state> for a canonical (phase free) Pauli string.

    In sampled mode `cfg.shots` bitstrings are drawn from the rotated
    distribution and the product of the +-1 eigenvalues over the support is
    averaged.
    """
    if not p.is_canonical():
        raise ContractError(f"expectation needs a phase-free string, got {p}")
    _check_dims(p, state)
    if cfg.mode == "exact":
        return float(np.vdot(state, apply_pauli(p, state)).real)
    if p.is_identity():
        return 1.0
    probs = measurement_distribution(state, p)
    counts = _stream(cfg, p).multinomial(cfg.shots, probs)
    eig = 1 - 2 * (np.bitwise_count(np.arange(probs.shape[0]) & p.support).astype(np.int64) & 1)
    return float(counts @ eig) / cfg.shots


def _dense_check(n_qubits: int, limit: int):
    if n_qubits > limit:
        raise DimensionError(f"{n_qubits} qubits exceeds the dense limit of {limit}")


def exact_evolve(
    h: HamiltonianSpec, state: np.ndarray, t, dense_limit: int = DENSE_QUBIT_LIMIT
) -> np.ndarray:
    """
    exp(-i H t)|state> via a dense Hermitian eigendecomposition.

    `t` may be a scalar (returns a state) or a 1-d array of times (returns an
    array of shape (len(t), 2**n)).
    """
    _dense_check(h.n_qubits, dense_limit)
    if state.shape != (1 << h.n_qubits,):
        raise DimensionError("state does not match the Hamiltonian size")
    hm = h.to_matrix()
    w, u = np.linalg.eigh((hm + hm.conj().T) / 2)
    c = u.conj().T @ state
    ts = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(ts, w))
    return (phases * c) @ u.T


def pure_density(state: np.ndarray) -> np.ndarray:
    return np.outer(state, state.conj())


def validate_density(rho: np.ndarray, atol: float = 1e-12, psd_tol: float = 1e-10):
    """Raise ContractError unless rho is Hermitian, unit trace and PSD."""
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ContractError(f"density matrix trace {np.trace(rho).real} != 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -psd_tol:
        raise ContractError("density matrix has negative eigenvalues")
