"""
Orbital stability of the ground state
=====================================

Start near the ground state w, integrate in real time, and watch the
Sigma-norm distance to the phase orbit {exp(i theta) w}. A stable orbit keeps
that distance of the order of the initial offset.
"""

from dipolar_gpe import PhysicsParams, make_grid, minimize
from dipolar_gpe.dynamics import DynamicsOptions, stability_experiment

grid = make_grid(32, 8.0)
params = PhysicsParams(5.0, 1.0)
ground = minimize(params, grid)
opts = DynamicsOptions(dt=5e-3, t_final=5.0, snapshot_stride=100)

for delta in (0.0, 1e-3, 1e-2, 5e-2):
    rep = stability_experiment(params, grid, delta, opts, ground=ground, seed=0)
    trace = " ".join(f"{d:.1e}" for d in rep.orbit_distance_series[::2])
    print(f"delta = {delta:<6} sup distance = {rep.sup_orbit_distance:.2e}   [{trace}]")
