"""Erasing correlations between two qubits: classical goes first.

Qubit B relaxes to the maximally mixed state while qubit A is left alone, so
every two-qubit state converges to rho_A x I/2. We compare the classically
correlated state (lam = 1) with the Bell state (lam = 0) and states in between.
The classical correlations vanish at the maximal rate that the speed limit
allows.
"""

import numpy as np

from qsl import TimeGrid, evolve_superop, skew_spectral_norm, step_propagators
from qsl.scenarios import decorrelator_scenario

grid = TimeGrid(0.0, 3.0, 600)
gen = decorrelator_scenario().generator()
props = step_propagators(gen, grid)
print(f"skew norm (fastest allowed log-decay rate): {skew_spectral_norm(gen):.4f}\n")
print(" lam    R(1)/R(0)    R(3)/R(0)   mean slope")
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    spec = decorrelator_scenario(lam=lam, grid=grid)
    traj = evolve_superop(gen, spec.initial_state, grid, reference=spec.reference, propagators=props)
    r = traj.tracked / traj.tracked[0]
    print(f"{lam:4.2f}   {r[200]:.4e}   {r[600]:.4e}   {np.log(r[600]) / 3.0:8.4f}")
