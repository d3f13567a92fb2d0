from functools import reduce

import numpy as np
import pytest

from cqff import builtin, prepare_basis_state, prepare_layered_random_state

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# lines printed by the acceptance suite, repeated in the terminal summary
ACCEPTANCE_LINES = []

# (name, n_qubits, K used in the experiments)
BUILTIN_CASES = [("H1", 2, 1), ("H1", 3, 2), ("H2", 4, 2), ("H2", 5, 3), ("H3", 2, 2)]


def kron_matrix(label: str) -> np.ndarray:
    """Dense matrix of a dense label, built with Kronecker products only."""
    return reduce(np.kron, [SINGLE[c] for c in label])


def dense_hamiltonian(pairs) -> np.ndarray:
    return sum(c * kron_matrix(lbl) for c, lbl in pairs)


def expm_herm(h: np.ndarray, t: float) -> np.ndarray:
    from scipy.linalg import expm

    return expm(-1j * t * h)


def case_state(name, n, seed):
    if name == "H3":
        return prepare_basis_state("10")
    return prepare_layered_random_state(n, 5, seed)


@pytest.fixture(params=BUILTIN_CASES, ids=lambda c: f"{c[0]}-{c[1]}q-K{c[2]}")
def builtin_case(request):
    name, n, K = request.param
    return builtin(name, n), K, name


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
