"""
Moment sets: which Pauli strings does CQFF need?

The cumulative K-moment set is grown breadth-first from the identity by
multiplying with the Hamiltonian's Pauli terms and dropping phases. Its size
decides how many expectation values the quantum device must provide.
"""
# %%
from cqff import build_moment_set, builtin, krylov_residual
from cqff.backend import prepare_layered_random_state

for name, n, K in [("H1", 2, 1), ("H1", 3, 2), ("H2", 4, 2), ("H2", 5, 3), ("H3", 2, 1)]:
    ms = build_moment_set(builtin(name, n), K)
    print(f"{name} on {n} qubits, K={K}: cumulative sizes {ms.level_sizes()[1:]}")

# %% [markdown]
# The strings themselves, level by level, for the two-qubit XY pair.

# %%
ms = build_moment_set(builtin("H3"), 2)
for label, level in zip(ms.labels(), ms.level_of):
    print(f"  level {level}: {label}")

# %% [markdown]
# A moment set of order K contains the Krylov vectors H^m |phi> for m <= K+1,
# which is why the fast-forwarded state never leaves the subspace.

# %%
h = builtin("H1", 3)
phi = prepare_layered_random_state(3, rng_seed=0)
ms = build_moment_set(h, 2)
for m in range(1, 4):
    print(f"residual of H^{m - 1}|phi> outside span(CS_2): {krylov_residual(h, phi, m, ms):.2e}")
