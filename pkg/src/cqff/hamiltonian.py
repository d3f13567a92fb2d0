"""Pauli-sum Hamiltonians and the builtin spin models."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError
from .pauli import PauliString, canonicalize, parse_label


@dataclass(frozen=True)
class HamiltonianSpec:
    """
    A linear combination of canonical Pauli strings, sum_a coeffs[a] * strings[a].

    Duplicate strings are merged on construction and phases of non-canonical
    inputs are folded into the coefficients, so every stored string is phase
    free and appears once. Term order is the order of first appearance.
    """

    n_qubits: int
    terms: tuple[tuple[complex, PauliString], ...] = field(default=())

    def __post_init__(self):
        merged: dict[PauliString, complex] = {}
        for coeff, p in self.terms:
            if p.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"term {p} acts on {p.n_qubits} qubits, expected {self.n_qubits}"
                )
            canon, phase = canonicalize(p)
            merged[canon] = merged.get(canon, 0) + complex(coeff) * phase
        object.__setattr__(self, "terms", tuple((c, p) for p, c in merged.items()))

    @classmethod
    def from_labels(cls, pairs, n_qubits: int) -> HamiltonianSpec:
        """Build from (coefficient, label) pairs, e.g. [(1.0, "XX"), (1.0, "Y1 Y2")]."""
        return cls(n_qubits, tuple((c, parse_label(lbl, n_qubits)) for c, lbl in pairs))

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=complex)

    @property
    def strings(self) -> list[PauliString]:
        return [p for _, p in self.terms]

    def __len__(self):
        return len(self.terms)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) <= atol))

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        for c, p in self.terms:
            m += c * p.to_matrix()
        return m

    def to_json(self) -> list:
        out = []
        for c, p in self.terms:
            coeff = c.real if c.imag == 0 else [c.real, c.imag]
            out.append([coeff, p.label()])
        return out


def heisenberg_xyz(n_qubits: int, couplings=(1.0, 2.0, 3.0)) -> HamiltonianSpec:
    """Open-chain XYZ model sum_j jx X_j X_j+1 + jy Y_j Y_j+1 + jz Z_j Z_j+1."""
    if n_qubits < 2:
        raise ConfigError("the XYZ chain needs at least 2 qubits")
    terms = []
    for j in range(n_qubits - 1):
        for letter, c in zip("XYZ", couplings):
            terms.append((c, PauliString.from_letters({j: letter, j + 1: letter}, n_qubits)))
    return HamiltonianSpec(n_qubits, tuple(terms))


def three_body_zxz(n_qubits: int, j_zxz: float = 1.0, boundary: str = "interior") -> HamiltonianSpec:
    """
    Three-body chain J * sum_k Z_{k-1} X_k Z_{k+1}.

    ``boundary="interior"`` keeps only the sites with both neighbours present
    (k = 2..N-1 in 1-based numbering). ``"periodic"`` runs over every site and
    wraps the neighbours around the ring.
    """
    if n_qubits < 3:
        raise ConfigError("the ZXZ chain needs at least 3 qubits")
    terms = []
    if boundary == "interior":
        for k in range(1, n_qubits - 1):
            terms.append((j_zxz, PauliString.from_letters({k - 1: "Z", k: "X", k + 1: "Z"}, n_qubits)))
    elif boundary == "periodic":
        for k in range(n_qubits):
            letters = {(k - 1) % n_qubits: "Z", k: "X", (k + 1) % n_qubits: "Z"}
            terms.append((j_zxz, PauliString.from_letters(letters, n_qubits)))
    else:
        raise ConfigError(f"unknown boundary mode {boundary!r}")
    return HamiltonianSpec(n_qubits, tuple(terms))


def xy_pair() -> HamiltonianSpec:
    """Two-qubit XY coupling X1 X2 + Y1 Y2."""
    return HamiltonianSpec.from_labels([(1.0, "XX"), (1.0, "YY")], 2)


def builtin(name: str, n_qubits: int | None = None, **kwargs) -> HamiltonianSpec:
    """Look up one of the builtin models "H1", "H2" or "H3"."""
    key = name.upper()
    if key == "H1":
        return heisenberg_xyz(n_qubits or 2, **kwargs)
    if key == "H2":
        return three_body_zxz(n_qubits or 4, **kwargs)
    if key == "H3":
        if n_qubits not in (None, 2):
            raise ConfigError("H3 is defined on 2 qubits only")
        return xy_pair()
    raise ConfigError(f"unknown builtin Hamiltonian {name!r}")
