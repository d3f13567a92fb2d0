"""
Assembly of the Gram matrix E and Hamiltonian matrix D of the ansatz states.

With canonical Pauli strings P_i the ansatz states are P_i|phi>, so every
matrix element collapses to a phase times a single expectation value:

    E_ij = <phi| P_i P_j |phi>,    D_ij = sum_a beta_a <phi| P_i P_a P_j |phi>.

Each distinct canonical string is estimated once and cached, and only the
upper triangle is estimated; the lower triangle is the conjugate mirror.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backend import EXACT, EstimatorConfig, expectation
from .errors import DimensionError
from .hamiltonian import HamiltonianSpec
from .moments import MomentSet
from .pauli import PauliString, canonicalize, multiply


class ExpectationCache:
    """Memoised <phi|P|phi> for one state and one estimator configuration."""

    def __init__(self, phi: np.ndarray, cfg: EstimatorConfig = EXACT):
        self.phi = phi
        self.cfg = cfg
        self.values: dict[PauliString, float] = {}
        self.calls = 0

    def __len__(self):
        return len(self.values)

    def get(self, p: PauliString) -> complex:
        """<phi|p|phi> for any (possibly phased) string p."""
        canon, phase = canonicalize(p)
        if canon not in self.values:
            if canon.is_identity():
                self.values[canon] = 1.0
            else:
                self.values[canon] = expectation(self.phi, canon, self.cfg)
                self.calls += 1
        return phase * self.values[canon]


@dataclass
class OverlapMatrices:
    D: np.ndarray
    E: np.ndarray
    meta: dict = field(default_factory=dict)


def _check(ms: MomentSet, o: HamiltonianSpec):
    if o.n_qubits != ms.n_qubits:
        raise DimensionError(
            f"operator acts on {o.n_qubits} qubits but moment set has {ms.n_qubits}"
        )


def _assemble(ms: MomentSet, element, exact_diag=None) -> np.ndarray:
    n = len(ms)
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            m[i, j] = element(ms.ops[i], ms.ops[j])
    m = np.triu(m, 1) + np.triu(m, 1).conj().T + np.diag(m.diagonal().real)
    if exact_diag is not None:
        np.fill_diagonal(m, exact_diag)
    return m


def assemble_E(ms: MomentSet, phi=None, cfg: EstimatorConfig = EXACT, cache: ExpectationCache | None = None) -> np.ndarray:
    if cache is None:
        cache = ExpectationCache(phi, cfg)
    # <chi_i|chi_i> = 1 needs no estimation
    return _assemble(ms, lambda p, q: cache.get(multiply(p, q)), exact_diag=1.0)


def assemble_observable(
    ms: MomentSet,
    o: HamiltonianSpec,
    phi=None,
    cfg: EstimatorConfig = EXACT,
    cache: ExpectationCache | None = None,
) -> np.ndarray:
    """Matrix of <chi_i|O|chi_j> for a Pauli-sum operator O."""
    _check(ms, o)
    if cache is None:
        cache = ExpectationCache(phi, cfg)

    def element(p, q):
        return sum(c * cache.get(multiply(multiply(p, s), q)) for c, s in o.terms)

    return _assemble(ms, element)


def assemble_D(ms: MomentSet, h: HamiltonianSpec, phi=None, cfg: EstimatorConfig = EXACT, cache=None) -> np.ndarray:
    return assemble_observable(ms, h, phi, cfg, cache)


def assemble(ms: MomentSet, h: HamiltonianSpec, phi: np.ndarray, cfg: EstimatorConfig = EXACT) -> OverlapMatrices:
    """D and E from one shared cache, with bookkeeping for reports."""
    cache = ExpectationCache(phi, cfg)
    E = assemble_E(ms, cache=cache)
    D = assemble_D(ms, h, cache=cache)
    meta = {
        "estimator": cfg.to_json(),
        "distinct_strings": len(cache),
        "backend_calls": cache.calls,
    }
    return OverlapMatrices(D, E, meta)
