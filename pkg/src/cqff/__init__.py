"""Classical-quantum fast-forwarding of Pauli-sum Hamiltonian dynamics."""

__version__ = "0.1.0"

from .backend import (
    EstimatorConfig,
    apply_pauli,
    exact_evolve,
    expectation,
    prepare_basis_state,
    prepare_layered_random_state,
)
from .evolve import (
    fast_forward,
    fidelity_vs_exact,
    initial_alpha,
    observable_trace,
    vff_mode,
)
from .hamiltonian import HamiltonianSpec, builtin, heisenberg_xyz, three_body_zxz, xy_pair
from .moments import MomentSet, build_moment_set, krylov_residual
from .overlaps import ExpectationCache, OverlapMatrices, assemble, assemble_D, assemble_E, assemble_observable
from .pauli import PauliString, canonicalize, commutes, multiply, parse_label
from .speceig import EigenSolution, completeness_defect, solve

__all__ = [
    "EigenSolution",
    "EstimatorConfig",
    "ExpectationCache",
    "HamiltonianSpec",
    "MomentSet",
    "OverlapMatrices",
    "PauliString",
    "apply_pauli",
    "assemble",
    "assemble_D",
    "assemble_E",
    "assemble_observable",
    "build_moment_set",
    "builtin",
    "canonicalize",
    "commutes",
    "completeness_defect",
    "exact_evolve",
    "expectation",
    "fast_forward",
    "fidelity_vs_exact",
    "heisenberg_xyz",
    "initial_alpha",
    "krylov_residual",
    "multiply",
    "observable_trace",
    "parse_label",
    "prepare_basis_state",
    "prepare_layered_random_state",
    "solve",
    "three_body_zxz",
    "vff_mode",
    "xy_pair",
]
