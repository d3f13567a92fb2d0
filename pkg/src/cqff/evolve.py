"""
Spectral fast-forwarding of the hybrid-state coefficients.

Given E-orthonormal generalized eigenpairs (lambda_j, v_j), the coefficient
vector evolves as

    alpha(T) = sum_j exp(-i lambda_j T) v_j v_j^dag E alpha(0),

at a cost that does not depend on T.
"""
from __future__ import annotations

import numpy as np

from .backend import exact_evolve
from .errors import ContractError
from .hamiltonian import HamiltonianSpec
from .moments import MomentSet
from .speceig import EigenSolution


def e_norm(alpha: np.ndarray, E: np.ndarray) -> np.ndarray:
    """sqrt(alpha^dag E alpha), the norm of the state the coefficients describe."""
    alpha = np.asarray(alpha)
    val = np.einsum("...i,ij,...j->...", alpha.conj(), E, alpha).real
    return np.sqrt(np.clip(val, 0.0, None))


def initial_alpha(ms: MomentSet, E: np.ndarray, start: np.ndarray | None = None) -> np.ndarray:
    """
    Coefficients of the starting state.

    With no `start` this is (1, 0, ..., 0), i.e. |phi> itself. A custom
    combination of ansatz states is rescaled to unit E-norm.
    """
    if not ms.ops[0].is_identity():
        raise ContractError("first moment operator must be the identity")
    if start is None:
        alpha = np.zeros(len(ms), dtype=complex)
        alpha[0] = 1.0
    else:
        alpha = np.asarray(start, dtype=complex)
        if alpha.shape != (len(ms),):
            raise ContractError(f"start vector has shape {alpha.shape}, expected ({len(ms)},)")
    norm = e_norm(alpha, E)
    if norm <= 1e-12 * max(np.linalg.norm(alpha), 1.0):
        raise ContractError("start vector describes the zero state (it lies in the null space of E)")
    return alpha / norm


def _coords(sol: EigenSolution, E: np.ndarray, alpha0: np.ndarray) -> np.ndarray:
    alpha0 = np.asarray(alpha0, dtype=complex)
    norm2 = float(np.vdot(alpha0, E @ alpha0).real)
    if norm2 <= sol.cutoff_used * max(np.vdot(alpha0, alpha0).real, 1e-300):
        raise ContractError(
            "alpha0 lies (almost) entirely in the null space of E; it represents the zero ket"
        )
    return sol.V.conj().T @ (E @ alpha0)


def fast_forward(sol: EigenSolution, E: np.ndarray, alpha0: np.ndarray, T) -> np.ndarray:
    """alpha(T); an array of times gives an array of shape (len(T), L)."""
    c = _coords(sol, E, alpha0)
    phases = np.exp(-1j * np.multiply.outer(np.asarray(T, dtype=float), sol.lambdas))
    return (phases * c) @ sol.V.T


def vff_mode(sol: EigenSolution, E: np.ndarray, alpha0: np.ndarray, delta_t: float, N: int) -> np.ndarray:
    """
    Coefficients after N steps of the linearised propagator 1 - i H dt.

    Each eigencomponent is scaled by (1 - i lambda_j dt)**N. Nothing is
    renormalised, so the E-norm grows as the map is not unitary.
    """
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    c = _coords(sol, E, alpha0)
    return sol.V @ ((1 - 1j * sol.lambdas * delta_t) ** N * c)


def cqff_state(ms: MomentSet, phi: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Dense state sum_i alpha_i ops[i]|phi>; accepts a stack of alphas."""
    return np.asarray(alpha) @ ms.basis(phi).T


def fidelity_vs_exact(h: HamiltonianSpec, phi: np.ndarray, ms: MomentSet, alpha_T: np.ndarray, T) -> np.ndarray | float:
    """|<exp(-iHT) phi | psi_cqff(T)>|**2 against the dense oracle."""
    psi = cqff_state(ms, phi, alpha_T)
    ref = exact_evolve(h, phi, T)
    f = np.abs(np.sum(ref.conj() * psi, axis=-1)) ** 2
    return float(f) if np.ndim(f) == 0 else f


def observable_trace(alpha_path: np.ndarray, M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Re(alpha^dag M alpha) per time point, plus |Im| of the same form.

    The imaginary part vanishes for a Hermitian M up to rounding; noisy
    matrices can leave a small residue, so it is reported, not raised.
    """
    alpha_path = np.atleast_2d(alpha_path)
    vals = np.einsum("ti,ij,tj->t", alpha_path.conj(), M, alpha_path)
    return vals.real, np.abs(vals.imag)


def inner_product(alpha: np.ndarray, beta: np.ndarray, E: np.ndarray) -> complex:
    """<psi(alpha)|psi(beta)> = alpha^dag E beta."""
    return complex(np.vdot(alpha, E @ beta))
