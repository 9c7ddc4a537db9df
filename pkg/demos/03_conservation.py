"""
Mass and energy under Strang splitting
======================================

Each substep of the splitting is unitary, so the mass is conserved to
roundoff. The energy is only conserved up to a second-order error in dt.
"""

import numpy as np

from dipolar_gpe import PhysicsParams, make_grid
from dipolar_gpe.dynamics import DynamicsOptions, propagate
from dipolar_gpe.groundstate import gaussian_state

grid = make_grid(32, 8.0)
params = PhysicsParams(5.0, 1.0)
# an off-center cloud sloshes in the trap
psi0 = gaussian_state(grid, center=(0.7, 0.0, 0.3))

prev = None
for dt in (0.02, 0.01, 0.005):
    opts = DynamicsOptions(dt=dt, t_final=1.0, snapshot_stride=1, monitors=("mass", "energy"))
    rep = propagate(grid, psi0, params, opts)
    ratio = "" if prev is None else f"  ratio {prev / rep.energy_drift:.3f}"
    print(f"dt = {dt:<6} mass drift {rep.mass_drift:.1e}  energy drift {rep.energy_drift:.2e}{ratio}")
    prev = rep.energy_drift

# without interactions the cloud's center swings with period 2 pi
opts = DynamicsOptions(dt=2 * np.pi / 400, t_final=2 * np.pi, snapshot_stride=50, monitors=(),
                       keep_snapshots=True)
rep = propagate(grid, gaussian_state(grid, center=(1.0, 0.0, 0.0)), PhysicsParams(0, 0), opts)
x1 = grid.mesh()[0]
for t, psi in rep.snapshots:
    print(f"t = {t:6.3f}  <x1> = {np.sum(x1 * np.abs(psi) ** 2) * grid.cell_volume:+.5f}"
          f"  cos t = {np.cos(t):+.5f}")
