"""
How much can noisy D and E move the spectrum?

Stewart bounds eigenvalue shifts, Bauer-Fike bounds the metric spectrum and
Davis-Kahan bounds eigenvector rotation. The error kernel turns eigenvalue
errors into the fidelity loss over time.
"""
# %%
import numpy as np

from cqff import assemble, build_moment_set, builtin, initial_alpha, solve
from cqff.backend import prepare_basis_state
from cqff.experiments import bounds_summary
from cqff.perturb import error_kernel, perturbed_eigenvalues

for row in bounds_summary(50):
    print(row)

# %% [markdown]
# Shift the two eigenvalues of the XY pair by d1 and d2. The infidelity is
# periodic with period 2 pi / |d1 - d2|.

# %%
h = builtin("H3")
phi = prepare_basis_state("10")
ms = build_moment_set(h, 1)
om = assemble(ms, h, phi)
sol = solve(om.D, om.E)
a0 = initial_alpha(ms, om.E)
d = np.array([0.02, -0.01])
sol_t = perturbed_eigenvalues(sol, d)
period = 2 * np.pi / abs(d[0] - d[1])
for frac in [0, 0.25, 0.5, 0.75, 1.0]:
    k = error_kernel(sol, sol_t, om.E, om.E, a0, frac * period)
    print(f"T = {frac:4.2f} period: infidelity {1 - abs(k) ** 2:.4f}")
