"""Interacting spin chain: the bound does not care about the Hamiltonian.

A chain with H = sum sigma_z + V0 sum sigma_x sigma_x and local dephasing.
The Liouville speed limit depends only on the jump operators, so it is the
same for weak (V0 = 0.1) and strong (V0 = 10) coupling. The actual decay of
R(t)/R(0) from random initial states is what changes. M = 4 keeps the run to
a few seconds; the acceptance suite runs M = 5.
"""

import numpy as np

from qsl import TimeGrid, cumulative_bounds, evolve_direct, skew_spectral_norm
from qsl.scenarios import interacting_chain_scenario

M = 4
grid = TimeGrid(0.0, 1.0, 1000)
for V0 in (0.1, 10.0):
    gen = interacting_chain_scenario(M=M, V0=V0).generator()
    bound = np.exp(-cumulative_bounds(gen, grid.times)["liouville"])
    env = np.ones_like(bound)
    for seed in range(5):
        spec = interacting_chain_scenario(M=M, V0=V0, seed=seed, grid=grid)
        traj = evolve_direct(gen, spec.initial_state, grid, reference=spec.reference)
        env = np.minimum(env, traj.tracked / traj.tracked[0])
    print(f"V0 = {V0:5.1f}: skew norm {skew_spectral_norm(gen):.3f}")
    for k in (100, 250, 500):
        print(f"   t = {grid.times[k]:.2f}   lowest R/R0 {env[k]:.3e}   bound {bound[k]:.3e}")
    assert np.all(env >= bound - 1e-7)
