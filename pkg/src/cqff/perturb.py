"""
Perturbation checks between noiseless (D, E) and estimated (D~, E~) matrices.

Each bound is evaluated on both sides and returned as a BoundReport. Unmet
preconditions (non positive-definite metric, no spectral gap) are reported in
the result rather than raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .speceig import EigenSolution

SLACK = 1e-12


@dataclass
class BoundReport:
    bound_name: str
    lhs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rhs: float = 0.0
    preconditions_met: bool = True
    reason: str = ""

    @property
    def holds(self) -> bool:
        return bool(self.preconditions_met and np.all(self.lhs <= self.rhs + SLACK))

    def summary(self) -> str:
        if not self.preconditions_met:
            return f"{self.bound_name}: preconditions not met ({self.reason})"
        worst = float(np.max(self.lhs)) if self.lhs.size else 0.0
        verdict = "holds" if self.holds else "VIOLATED"
        return f"{self.bound_name}: max lhs {worst:.3e} <= rhs {self.rhs:.3e} {verdict}"


def spectral_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def _whitened(D: np.ndarray, E: np.ndarray) -> np.ndarray | None:
    """(R^dag)^-1 D R^-1 with E = R^dag R, or None if E is not positive definite."""
    try:
        L = np.linalg.cholesky((E + E.conj().T) / 2)  # E = L L^dag, R = L^dag
    except np.linalg.LinAlgError:
        return None
    X = np.linalg.solve(L, D)
    A = np.linalg.solve(L, X.conj().T).conj().T
    return (A + A.conj().T) / 2


def stewart_bound(D, E, D_t, E_t) -> BoundReport:
    """|lambda_i - lambda~_i| <= ||A - A~|| for eigenvalues sorted ascending."""
    rep = BoundReport("stewart")
    A, A_t = _whitened(D, E), _whitened(D_t, E_t)
    if A is None or A_t is None:
        rep.preconditions_met = False
        rep.reason = "E" if A is None else "E~"
        rep.reason += " is not positive definite"
        return rep
    lam, lam_t = np.linalg.eigvalsh(A), np.linalg.eigvalsh(A_t)
    rep.lhs = np.abs(lam - lam_t)
    rep.rhs = spectral_norm(A - A_t)
    return rep


def bauer_fike(E, E_t) -> BoundReport:
    """Each eigenvalue of E~ lies within ||E~ - E|| of some eigenvalue of E."""
    rep = BoundReport("bauer_fike")
    if np.max(np.abs(E - np.conj(E).T), initial=0) > 1e-8:
        rep.preconditions_met = False
        rep.reason = "E is not Hermitian"
        return rep
    w = np.linalg.eigvalsh((E + E.conj().T) / 2)
    w_t = np.linalg.eigvals(E_t)
    rep.lhs = np.abs(w_t[:, None] - w[None, :]).min(axis=1)
    rep.rhs = spectral_norm(E_t - E)
    return rep


def davis_kahan(D, E, D_t, E_t, split_index: int, delta_margin: float | None = None, interval=None) -> BoundReport:
    """
    sin-theta bound ||V0^dag V1~|| <= ||V0^dag (A~ - A) V1~|| / delta.

    V0 spans the first `split_index` eigenvectors of the whitened A, V1~ the
    remaining eigenvectors of A~. `interval` (a, b) must contain the first
    `split_index` eigenvalues of A and defaults to their hull. With no
    `delta_margin` the largest admissible delta (distance from the V1~
    eigenvalues to [a, b]) is used.
    """
    rep = BoundReport("davis_kahan")
    A, A_t = _whitened(D, E), _whitened(D_t, E_t)
    if A is None or A_t is None:
        rep.preconditions_met = False
        rep.reason = ("E" if A is None else "E~") + " is not positive definite"
        return rep
    n = A.shape[0]
    if not 0 < split_index < n:
        rep.preconditions_met = False
        rep.reason = f"split index {split_index} outside 1..{n - 1}"
        return rep
    lam, V = np.linalg.eigh(A)
    lam_t, V_t = np.linalg.eigh(A_t)
    lam0 = lam[:split_index]
    a, b = interval if interval is not None else (lam0.min(), lam0.max())
    if lam0.min() < a or lam0.max() > b:
        rep.preconditions_met = False
        rep.reason = "interval does not contain the leading eigenvalues of A"
        return rep
    lam1_t = lam_t[split_index:]
    gap = float(np.min(np.maximum(a - lam1_t, lam1_t - b)))
    delta = gap if delta_margin is None else delta_margin
    if delta <= 0 or delta > gap:
        rep.preconditions_met = False
        rep.reason = f"no spectral gap: admissible delta is {gap:.3e}, requested {delta:.3e}"
        return rep
    V0, V1_t = V[:, :split_index], V_t[:, split_index:]
    rep.lhs = np.array([spectral_norm(V0.conj().T @ V1_t)])
    rep.rhs = spectral_norm(V0.conj().T @ (A_t - A) @ V1_t) / delta
    return rep


def error_kernel(sol: EigenSolution, sol_t: EigenSolution, E, E_t, alpha0, T) -> complex | np.ndarray:
    """
    alpha0^dag K(T) alpha0, the overlap <psi(alpha(T))|psi(alpha~(T))>, with

        K = sum_{j j'} exp(-i (lambda~_j' - lambda_j) T) E v_j v_j^dag E v~_j' v~_j'^dag E~.

    Accepts an array of times.
    """
    if sol.V.shape[0] != sol_t.V.shape[0] or E.shape != E_t.shape:
        raise ContractError("noiseless and perturbed solutions use different moment sets")
    alpha0 = np.asarray(alpha0, dtype=complex)
    left = sol.V.conj().T @ (E @ alpha0)  # v_j^dag E alpha0
    right = sol_t.V.conj().T @ (E_t @ alpha0)  # v~_j'^dag E~ alpha0
    cross = sol.V.conj().T @ E @ sol_t.V  # v_j^dag E v~_j'
    T = np.asarray(T, dtype=float)
    ph = np.exp(1j * np.multiply.outer(T, sol.lambdas))
    ph_t = np.exp(-1j * np.multiply.outer(T, sol_t.lambdas))
    val = np.einsum("...j,j,jk,...k,k->...", ph, left.conj(), cross, ph_t, right)
    return complex(val) if val.ndim == 0 else val


def perturbed_eigenvalues(sol: EigenSolution, shifts) -> EigenSolution:
    """Same eigenvectors, eigenvalues moved by `shifts`."""
    return EigenSolution(
        lambdas=sol.lambdas + np.asarray(shifts, dtype=float),
        V=sol.V,
        rank=sol.rank,
        cutoff_used=sol.cutoff_used,
        dropped_spectrum=sol.dropped_spectrum,
    )
