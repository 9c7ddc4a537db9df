"""
Collapse in the unstable regime
===============================

With strong attraction and negative energy the solution concentrates until
the grid can no longer resolve it. Propagation stops and reports when.
"""

from dipolar_gpe import PhysicsParams, make_grid
from dipolar_gpe.dynamics import BlowUpError, DynamicsOptions, propagate
from dipolar_gpe.energy import energy_direct
from dipolar_gpe.groundstate import gaussian_state

grid = make_grid(32, 8.0)
psi0 = gaussian_state(grid)

for lam in [(-60.0, 1.0), (-100.0, 1.0), (5.0, 1.0)]:
    params = PhysicsParams(*lam)
    E = energy_direct(grid, psi0, params)
    try:
        rep = propagate(grid, psi0, params, DynamicsOptions(dt=1e-3, t_final=1.0))
        print(f"lambda = {lam}: E = {E:+.3f}, ran to t = {rep.times[-1]:.2f}")
    except BlowUpError as exc:
        print(f"lambda = {lam}: E = {E:+.3f}, stopped at t = {exc.time:.3f} ({exc.reason})")
