"""
Generalized Hermitian eigenproblem D v = lambda E v with a semidefinite metric.

E is diagonalised first and only the directions above a relative cutoff are
kept, which both removes the exact null space of a linearly dependent ansatz
and the small negative eigenvalues that shot noise puts into E. On the kept
subspace the problem is whitened into an ordinary Hermitian one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateMetricError

DEFAULT_CUTOFF = 1e-10
SAMPLED_CUTOFF = 1e-3


@dataclass(frozen=True)
class EigenSolution:
    """
    lambdas: ascending generalized eigenvalues, length rank
    V: L x rank matrix of E-orthonormal eigenvectors (V^dag E V = I)
    cutoff_used: absolute threshold on E's eigenvalues
    dropped_spectrum: E eigenvalues that fell below the threshold
    """

    lambdas: np.ndarray
    V: np.ndarray
    rank: int
    cutoff_used: float
    dropped_spectrum: np.ndarray


def _hermitian_part(a: np.ndarray, name: str, atol: float = 1e-8) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, np.max(np.abs(a)))
    if np.max(np.abs(a - a.conj().T)) > atol * scale:
        raise ContractError(f"{name} is not Hermitian")
    return (a + a.conj().T) / 2


def solve(D: np.ndarray, E: np.ndarray, cutoff_rel: float = DEFAULT_CUTOFF) -> EigenSolution:
    D = _hermitian_part(D, "D")
    E = _hermitian_part(E, "E")
    if D.shape != E.shape:
        raise ContractError(f"D {D.shape} and E {E.shape} differ in shape")
    sigma, U = np.linalg.eigh(E)
    smax = sigma.max()
    if smax <= 0:
        raise DegenerateMetricError("E has no positive eigenvalue")
    cutoff = cutoff_rel * smax
    keep = sigma >= cutoff
    if not keep.any():
        raise DegenerateMetricError("every direction of E lies below the cutoff")
    W = U[:, keep] / np.sqrt(sigma[keep])
    A = W.conj().T @ D @ W
    lam, B = np.linalg.eigh((A + A.conj().T) / 2)
    return EigenSolution(
        lambdas=lam,
        V=W @ B,
        rank=int(keep.sum()),
        cutoff_used=float(cutoff),
        dropped_spectrum=sigma[~keep],
    )


def column_space_basis(E: np.ndarray, cutoff_rel: float = DEFAULT_CUTOFF) -> np.ndarray:
    """Orthonormal columns spanning the retained column space of E."""
    sigma, U = np.linalg.eigh(_hermitian_part(E, "E"))
    return U[:, sigma >= cutoff_rel * sigma.max()]


def completeness_defect(sol: EigenSolution, E: np.ndarray, probes: np.ndarray | None = None) -> float:
    """
    max ||(sum_j v_j v_j^dag E) x - x|| over probe vectors x.

    Default probes are an orthonormal basis of the retained column space of E;
    a probe with a null-space component is not reproduced, by construction.
    """
    if probes is None:
        probes = column_space_basis(E, sol.cutoff_used / max(np.linalg.eigvalsh(E).max(), 1e-300))
    probes = np.asarray(probes, dtype=complex).reshape(E.shape[0], -1)
    proj = sol.V @ (sol.V.conj().T @ E)
    return float(np.linalg.norm(proj @ probes - probes, axis=0).max())
