"""
Noisy Trotter against CQFF on the XY pair.

Every CNOT in the Trotter circuit is followed by two-qubit depolarizing noise
of strength p. With the calibrated p the Trotter fidelity falls to 1/2 after
about 25 steps and settles at 1/4, the maximally mixed value. CQFF needs no
deep circuit and stays at fidelity 1.
"""
# %%
import numpy as np

from cqff import EstimatorConfig, assemble, build_moment_set, builtin, fast_forward, fidelity_vs_exact, initial_alpha, solve
from cqff.backend import prepare_basis_state
from cqff.speceig import SAMPLED_CUTOFF
from cqff.trotter import CALIBRATED_NOISE_P, TrotterConfig, fidelity_curve

h = builtin("H3")
phi = prepare_basis_state("10")
cfg = TrotterConfig(delta_t=0.5, noise_p=CALIBRATED_NOISE_P)
steps = [0, 5, 10, 25, 50, 100, 400]
F_trotter = fidelity_curve(h, phi, steps, cfg)

ms = build_moment_set(h, 2)
om = assemble(ms, h, phi, EstimatorConfig("sampled", 8192, 0))
sol = solve(om.D, om.E, SAMPLED_CUTOFF)
a0 = initial_alpha(ms, om.E)
T = np.array(steps) * cfg.delta_t
F_cqff = fidelity_vs_exact(h, phi, ms, fast_forward(sol, om.E, a0, T), T)

print(f"{'N':>5} {'Trotter':>9} {'CQFF K=2':>9}")
for n, a, b in zip(steps, F_trotter, F_cqff):
    print(f"{n:>5} {a:9.4f} {b:9.4f}")
