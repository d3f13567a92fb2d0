"""Cumulative K-moment operator sets built from the Hamiltonian's Pauli terms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import apply_pauli
from .hamiltonian import HamiltonianSpec
from .pauli import PauliString, canonicalize, multiply


@dataclass(frozen=True)
class MomentSet:
    """
    Ordered operators whose action on |phi> gives the ansatz states.

    ``ops[i] |phi>`` is the i-th ansatz state; ``ops[0]`` is the identity.
    ``level_of[i]`` is the shortest product length that produces ``ops[i]``.
    Products that differ only by a global phase are stored once.
    """

    n_qubits: int
    ops: tuple[PauliString, ...]
    level_of: tuple[int, ...]
    K: int

    def __len__(self):
        return len(self.ops)

    def labels(self) -> list[str]:
        return [p.label() for p in self.ops]

    def level_sizes(self) -> list[int]:
        """Cumulative set size after each level 0..K."""
        counts = np.bincount(self.level_of, minlength=self.K + 1)
        return np.cumsum(counts).tolist()

    def basis(self, phi: np.ndarray) -> np.ndarray:
        """Dense matrix whose columns are ops[i] |phi>."""
        return np.column_stack([apply_pauli(p, phi) for p in self.ops])


def build_moment_set(h: HamiltonianSpec, K: int) -> MomentSet:
    """
    Breadth-first products of Hamiltonian strings up to length K.

    Level p holds every product U_a @ q for q in level p-1 (full level, not
    only its new members, since e.g. U_a U_a = I reappears at level 2).
    """
    if K < 0:
        raise ValueError(f"K must be non-negative, got {K}")
    ident = PauliString.identity(h.n_qubits)
    ops = [ident]
    level_of = [0]
    seen = {ident: 0}
    level = [ident]
    for p in range(1, K + 1):
        nxt: dict[PauliString, None] = {}
        for q in level:
            for u in h.strings:
                nxt.setdefault(canonicalize(multiply(u, q))[0], None)
        for op in nxt:
            if op not in seen:
                seen[op] = len(ops)
                ops.append(op)
                level_of.append(p)
        level = list(nxt)
    return MomentSet(h.n_qubits, tuple(ops), tuple(level_of), K)


def krylov_residual(h: HamiltonianSpec, phi: np.ndarray, m: int, ms: MomentSet) -> float:
    """
    Norm of the part of H**(m-1)|phi> lying outside span{ops[i]|phi>}.

    Zero (to rounding) whenever m <= K + 1.
    """
    if not 1 <= m <= ms.K + 1:
        raise ValueError(f"m must lie in 1..{ms.K + 1}, got {m}")
    hm = h.to_matrix()
    v = phi.astype(complex)
    for _ in range(m - 1):
        v = hm @ v
    b = ms.basis(phi)
    coeffs, *_ = np.linalg.lstsq(b, v, rcond=None)
    return float(np.linalg.norm(v - b @ coeffs))
