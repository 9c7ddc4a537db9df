"""
Stable and unstable parameter regimes
=====================================

Whether the trapped dipolar condensate has a ground state depends only on
the pair (lambda1, lambda2). Below the threshold the energy is unbounded
below on the mass sphere, and a family of cigar-shaped trial states shows it.
"""

import numpy as np

from dipolar_gpe import PhysicsParams, classify, make_grid, witness_report

# the classifier returns the worst-case value of lambda1 + lambda2 * khat
for lam in [(5, 1), (0, 1), (9, -1), (8, -1), (0, 0), (-0.1, 0)]:
    print(f"{str(lam):>10}  {classify(*lam)}")

# the trial family is thin across the dipole axis (width eps) and long
# along it (width sqrt(eps)); this box resolves eps down to 1/16
grid = make_grid((128, 128, 64), (0.25, 0.25, 0.5))
eps = [2.0 ** -k for k in range(1, 5)]

for lam in [(0, 1), (5, 1)]:
    rep = witness_report(PhysicsParams(*lam), grid, eps)
    print(f"\nlambda = {lam}: collapse verdict {rep.verdict}")
    print(f"{'eps':>8} {'kinetic':>12} {'interaction':>14} {'energy':>12} {'int*eps^2*h':>12}")
    for e, k, i, E, n in zip(rep.epsilons, rep.kinetic, rep.interaction, rep.energies,
                             rep.normalized_interaction):
        print(f"{e:8.4f} {k:12.2f} {i:14.2f} {E:12.2f} {n:12.3f}")

# kinetic energy grows like eps^-2; the interaction grows like eps^-2 h^-1 and
# carries the sign of lambda1 - (4 pi / 3) lambda2, so it wins when negative
slope = np.polyfit(np.log(rep.epsilons), np.log(rep.kinetic), 1)[0]
print(f"\nlog-log slope of the kinetic term: {slope:.3f}")
