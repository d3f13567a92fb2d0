"""
First-order Trotter baseline, noiseless or with two-qubit depolarizing noise.

Every factor exp(-i theta P) with theta = beta * dt is compiled to the usual
circuit: rotate each support qubit into the Z basis, compute the parity onto
the last support qubit with a CNOT ladder, apply Rz(2 theta), undo the
ladder and the basis change. Rz(phi) = diag(exp(-i phi/2), exp(i phi/2)), so
Rz(2 theta) on the parity qubit realises exp(-i theta Z...Z).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .backend import (
    DENSE_QUBIT_LIMIT,
    apply_1q,
    apply_2q,
    exact_evolve,
    n_qubits_of,
    pure_density,
)
from .errors import DimensionError
from .hamiltonian import HamiltonianSpec

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_SDG = np.diag([1, -1j])
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

# Fitted so that the noisy H3 run from |10> at dt = 0.5 drops to F = 0.5 after
# 25 steps; see calibrate_noise. Not a hardware parameter.
CALIBRATED_NOISE_P = 0.010926


@dataclass(frozen=True)
class TrotterConfig:
    delta_t: float = 0.5
    order: int = 1
    noise_p: float = 0.0
    max_steps: int = 10_000

    def __post_init__(self):
        if self.delta_t <= 0:
            raise ValueError("delta_t must be positive")
        if self.order != 1:
            raise ValueError("only first-order Trotter is implemented")
        if not 0.0 <= self.noise_p <= 1.0:
            raise ValueError("noise_p must lie in [0, 1]")


@dataclass(frozen=True)
class Gate:
    name: str  # "h", "s", "sdg", "cnot", "rz" or "phase"
    qubits: tuple[int, ...]
    angle: float = 0.0

    @property
    def entangling(self) -> bool:
        return self.name == "cnot"

    def matrix(self) -> np.ndarray:
        if self.name == "h":
            return _H
        if self.name == "s":
            return _S
        if self.name == "sdg":
            return _SDG
        if self.name == "cnot":
            return _CNOT
        if self.name == "rz":
            return np.diag([np.exp(-0.5j * self.angle), np.exp(0.5j * self.angle)])
        if self.name == "phase":
            return np.array([[np.exp(-1j * self.angle)]])
        raise ValueError(f"unknown gate {self.name!r}")


def pauli_rotation(p, theta: float) -> list[Gate]:
    """Gate sequence for exp(-i theta p) with p a canonical Pauli string."""
    letters = p.letters()
    if not letters:
        return [Gate("phase", (), theta)]
    support = sorted(letters)
    pre, post = [], []
    for q in support:
        if letters[q] == "X":
            pre.append(Gate("h", (q,)))
            post.append(Gate("h", (q,)))
        elif letters[q] == "Y":
            pre += [Gate("sdg", (q,)), Gate("h", (q,))]
            post += [Gate("h", (q,)), Gate("s", (q,))]
    ladder = [Gate("cnot", (a, b)) for a, b in zip(support, support[1:])]
    return pre + ladder + [Gate("rz", (support[-1],), 2 * theta)] + ladder[::-1] + post


def trotter_step(h: HamiltonianSpec, cfg: TrotterConfig = TrotterConfig()) -> list[Gate]:
    """One first-order step: the product of exp(-i beta_a P_a dt) in term order."""
    gates = []
    for coeff, p in h.terms:
        if abs(coeff.imag) > 1e-12:
            raise ValueError(f"term {p} has a complex coefficient {coeff}")
        gates += pauli_rotation(p, coeff.real * cfg.delta_t)
    return gates


def apply_gate(state: np.ndarray, g: Gate) -> np.ndarray:
    if g.name == "phase":
        return np.exp(-1j * g.angle) * state
    if len(g.qubits) == 1:
        return apply_1q(state, g.matrix(), g.qubits[0])
    return apply_2q(state, g.matrix(), *g.qubits)


def _apply_gate_dm(rho: np.ndarray, g: Gate, n: int) -> np.ndarray:
    # rho as a 2n-qubit vector: rows are qubits 0..n-1, columns n..2n-1
    if g.name == "phase":
        return rho
    vec = rho.reshape(-1)
    m = g.matrix()
    if len(g.qubits) == 1:
        (q,) = g.qubits
        vec = apply_1q(apply_1q(vec, m, q), m.conj(), n + q)
    else:
        a, b = g.qubits
        vec = apply_2q(apply_2q(vec, m, a, b), m.conj(), n + a, n + b)
    return vec.reshape(rho.shape)


def depolarize_2q(rho: np.ndarray, a: int, b: int, p: float) -> np.ndarray:
    """(1 - p) rho + p Tr_ab(rho) (x) I_ab / 4."""
    n = n_qubits_of(rho[0])
    t = np.moveaxis(rho.reshape((2,) * 2 * n), [a, b, n + a, n + b], [0, 1, 2, 3])
    reduced = np.einsum("ijij...->...", t)
    mixed = np.zeros_like(t)
    for i in range(2):
        for j in range(2):
            mixed[i, j, i, j] = reduced / 4
    mixed = np.moveaxis(mixed, [0, 1, 2, 3], [a, b, n + a, n + b]).reshape(rho.shape)
    return (1 - p) * rho + p * mixed


def _step_dm(rho: np.ndarray, gates: list[Gate], noise_p: float) -> np.ndarray:
    n = n_qubits_of(rho[0])
    for g in gates:
        rho = _apply_gate_dm(rho, g, n)
        if g.entangling and noise_p > 0:
            rho = depolarize_2q(rho, *g.qubits, noise_p)
    return rho


def _step_unitary(gates: list[Gate], n: int) -> np.ndarray:
    dim = 1 << n
    cols = []
    for k in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        for g in gates:
            v = apply_gate(v, g)
        cols.append(v)
    return np.column_stack(cols)


def _step_superop(gates: list[Gate], n: int, noise_p: float) -> np.ndarray:
    # channel as a matrix acting on rho.reshape(-1)
    dim = 1 << n
    cols = []
    for k in range(dim * dim):
        e = np.zeros(dim * dim, dtype=complex)
        e[k] = 1.0
        cols.append(_step_dm(e.reshape(dim, dim), gates, noise_p).reshape(-1))
    return np.column_stack(cols)


def _check_size(n: int):
    if n > DENSE_QUBIT_LIMIT:
        raise DimensionError(f"{n} qubits exceeds the dense limit of {DENSE_QUBIT_LIMIT}")


def trajectory(h: HamiltonianSpec, psi0: np.ndarray, steps, cfg: TrotterConfig = TrotterConfig()):
    """
    Yield (N, rho_N) for each N in the sorted `steps`, advancing incrementally.

    Noiseless runs stay on the pure-state path; rho is formed only at output.
    """
    n = h.n_qubits
    _check_size(n)
    gates = trotter_step(h, cfg)
    noisy = cfg.noise_p > 0
    if noisy:
        state = pure_density(psi0)
        step = _step_superop(gates, n, cfg.noise_p) if n <= 4 else None
    else:
        state = psi0.astype(complex)
        step = _step_unitary(gates, n)
    done = 0
    for target in sorted(int(s) for s in steps):
        while done < target:
            if step is not None:
                state = step @ state.reshape(-1)
                state = state.reshape((1 << n,) * 2) if noisy else state
            else:
                state = _step_dm(state, gates, cfg.noise_p)
            done += 1
        yield target, (state.copy() if noisy else pure_density(state))


def simulate(h: HamiltonianSpec, psi0: np.ndarray, steps: int, cfg: TrotterConfig = TrotterConfig()) -> np.ndarray:
    """Density matrix after `steps` Trotter steps."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    return next(trajectory(h, psi0, [steps], cfg))[1]


def fidelity(rho: np.ndarray, h: HamiltonianSpec, psi0: np.ndarray, t: float) -> float:
    """<psi(t)|rho|psi(t)> with psi(t) the exact evolution of psi0."""
    psi = exact_evolve(h, psi0, t)
    return float(np.vdot(psi, rho @ psi).real)


def fidelity_curve(h: HamiltonianSpec, psi0: np.ndarray, steps, cfg: TrotterConfig = TrotterConfig()) -> np.ndarray:
    steps = sorted(int(s) for s in steps)
    return np.array([fidelity(rho, h, psi0, n * cfg.delta_t) for n, rho in trajectory(h, psi0, steps, cfg)])


def calibrate_noise(
    h: HamiltonianSpec,
    psi0: np.ndarray,
    delta_t: float = 0.5,
    target_steps: int = 25,
    target_fidelity: float = 0.5,
) -> float:
    """Depolarizing probability that puts F(target_steps) at target_fidelity."""

    def gap(p):
        cfg = TrotterConfig(delta_t=delta_t, noise_p=p)
        return fidelity(simulate(h, psi0, target_steps, cfg), h, psi0, target_steps * delta_t) - target_fidelity

    return brentq(gap, 1e-6, 0.5, xtol=1e-10)
