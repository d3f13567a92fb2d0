"""
Sampled expectation values and what they do to the fast-forwarded state.

Each distinct Pauli string is measured with a finite number of shots. The
RMS error of D and E shrinks as 1/sqrt(shots).
"""
# %%
import numpy as np

from cqff import EstimatorConfig, assemble, build_moment_set, builtin, fast_forward, fidelity_vs_exact, initial_alpha, solve
from cqff.backend import prepare_layered_random_state
from cqff.speceig import SAMPLED_CUTOFF

h = builtin("H1", 2)
phi = prepare_layered_random_state(2, rng_seed=0)
ms = build_moment_set(h, 1)
exact = assemble(ms, h, phi)

for shots in [256, 1024, 4096, 8192]:
    errs = [np.abs(assemble(ms, h, phi, EstimatorConfig("sampled", shots, s)).E - exact.E) for s in range(20)]
    print(f"{shots:>5} shots: RMS error of E {np.sqrt(np.mean(np.square(errs))):.4f}")

# %% [markdown]
# Fidelity of sampled runs over time. For the 2-qubit chain the moment strings
# form a closed group, so shot noise enters D and E consistently and the
# state stays exact. On 3 qubits the noise costs a small, constant deficit.

# %%
T = np.array([0.0, 1.0, 10.0, 100.0])
for n, K in [(2, 1), (3, 2)]:
    h = builtin("H1", n)
    phi = prepare_layered_random_state(n, rng_seed=0)
    ms = build_moment_set(h, K)
    om = assemble(ms, h, phi, EstimatorConfig("sampled", 8192, 0))
    sol = solve(om.D, om.E, SAMPLED_CUTOFF)
    a0 = initial_alpha(ms, om.E)
    F = fidelity_vs_exact(h, phi, ms, fast_forward(sol, om.E, a0, T), T)
    print(f"H1 {n} qubits, K={K}: fidelity at T={T.tolist()}: {np.round(F, 5).tolist()}")
