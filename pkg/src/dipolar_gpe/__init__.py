"""Ground states, collapse witnesses and orbital stability for the dipolar
Gross-Pitaevskii equation on a periodic spectral grid."""

from .dipole import dipole_potential, dipole_quadratic, khat
from .dynamics import (
    BlowUpError,
    DynamicsOptions,
    StabilityReport,
    orbit_distance,
    propagate,
    stability_experiment,
    strang_step,
)
from .energy import (
    PhysicsParams,
    chemical_potential,
    el_residual,
    energy_direct,
    energy_fourier,
    energy_gradient,
    weinstein,
)
from .groundstate import (
    GroundStateResult,
    SolverOptions,
    UnstableRegimeError,
    minimize,
    phase_align,
    project_sphere,
    symmetry_certificate,
)
from .regimes import CollapseWitnessReport, Regime, classify, witness_field, witness_report
from .spectral import Grid3D, make_grid

__version__ = "0.1.0"
