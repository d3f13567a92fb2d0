"""
Fast-forwarding the XY pair from |10>.

Exact overlaps -> generalized eigenproblem -> alpha(T) for any T at constant
cost. The closed form is cos(2T)|10> - i sin(2T)|01>.
"""
# %%
import numpy as np

from cqff import assemble, build_moment_set, builtin, fast_forward, fidelity_vs_exact, initial_alpha, solve
from cqff.backend import prepare_basis_state
from cqff.evolve import cqff_state

h = builtin("H3")
phi = prepare_basis_state("10")
ms = build_moment_set(h, 1)
om = assemble(ms, h, phi)
print("E =\n", om.E.real)
print("D =\n", om.D.real)

# %% [markdown]
# E is singular: XX|10> and YY|10> are the same state. The solver drops the
# null direction and keeps a rank-2 problem with eigenvalues +-2.

# %%
sol = solve(om.D, om.E)
print("rank", sol.rank, "eigenvalues", sol.lambdas)
a0 = initial_alpha(ms, om.E)

# %%
for T in [0.0, 0.7, 1e3, 1.25e6]:
    a = fast_forward(sol, om.E, a0, T)
    psi = cqff_state(ms, phi, a)
    F = fidelity_vs_exact(h, phi, ms, a, T)
    print(f"T={T:>9}: |<10|psi>|^2={abs(psi[2])**2:.6f}  cos^2(2T)={np.cos(2 * T)**2:.6f}  F={F:.12f}")
