"""Ground states: minimize the energy on the mass sphere ``||u||_2 = c``.

The iteration is a projected (Riemannian) gradient descent

    u <- c (u - tau d) / ||u - tau d||,   d = P (G(u) + mu(u) u)

with Armijo backtracking on ``tau``.  ``P`` is a symmetric positive
preconditioner built from the kinetic and trap operators; it only changes the
metric in which the gradient is taken, so each accepted step still lowers E.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .energy import chemical_potential, energy_direct, energy_gradient, el_residual
from .regimes import classify
from .spectral import fftn, ifftn, inner, l2_norm_sq

__all__ = [
    "SolverOptions",
    "GroundStateResult",
    "UnstableRegimeError",
    "project_sphere",
    "phase_align",
    "gaussian_state",
    "initial_state",
    "minimize",
    "SymmetryCertificate",
    "symmetry_certificate",
]

log = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MIN_STEP = 1e-12
_MAX_STEP = 1e3
# relative size of floating-point noise in an energy evaluation
_ROUNDOFF = 1e-13


class UnstableRegimeError(ValueError):
    """The energy is unbounded below on the mass sphere; no ground state exists."""

    def __init__(self, regime):
        super().__init__(
            f"{regime.tag} regime (margin={regime.margin:.4f}): the energy is unbounded "
            "below on the mass sphere; see regimes.witness_report for the collapse family"
        )
        self.regime = regime


@dataclass
class SolverOptions:
    initial_guess: str = "gaussian"  # "gaussian" | "random" | "provided"
    initial_field: np.ndarray | None = None
    step_init: float = 1.0
    tol_residual: float = 1e-8
    max_iters: int = 5000
    backtrack_factor: float = 0.5
    seed: int = 0
    perturbation: float = 0.3

    def __post_init__(self):
        if self.initial_guess not in ("gaussian", "random", "provided"):
            raise ValueError(f"unknown initial_guess {self.initial_guess!r}")
        if self.initial_guess == "provided" and self.initial_field is None:
            raise ValueError("initial_guess='provided' needs initial_field")
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not self.step_init > 0:
            raise ValueError("step_init must be positive")


@dataclass
class GroundStateResult:
    state: np.ndarray
    energy: float
    mu: float
    residual: float
    iterations: int
    energy_history: list = field(default_factory=list, repr=False)
    converged: bool = True


def project_sphere(grid, u, c):
    """Rescale ``u`` onto ``{||u||_2 = c}``."""
    m = l2_norm_sq(grid, u)
    if m == 0.0:
        raise ValueError("cannot project the zero field onto the mass sphere")
    return u * (c / np.sqrt(m))


def phase_align(grid, u):
    """Remove the global phase so that ``<u, |u|>`` is real and positive."""
    z = inner(grid, u, np.abs(u))
    if z == 0:
        raise ValueError("cannot phase-align the zero field")
    out = np.asarray(u, dtype=complex) * (z / abs(z))
    return out


def gaussian_state(grid, c=1.0, center=(0.0, 0.0, 0.0), momentum=(0.0, 0.0, 0.0)):
    """``c pi^-3/4 exp(-|x - x0|^2 / 2 + i p.x)``, the trap ground state when centered."""
    x1, x2, x3 = grid.axes
    parts = [
        np.exp(-0.5 * (x - x0) ** 2 + 1j * p * x)
        for x, x0, p in zip((x1, x2, x3), center, momentum)
    ]
    u = c * np.pi ** -0.75 * parts[0][:, None, None] * parts[1][None, :, None] * parts[2][None, None, :]
    if not any(momentum):
        u = u.real.copy()
    return u


def initial_state(grid, c, opts):
    if opts.initial_guess == "provided":
        grid.check(opts.initial_field)
        return project_sphere(grid, np.asarray(opts.initial_field), c)
    u = gaussian_state(grid, c)
    if opts.initial_guess == "random":
        rng = np.random.default_rng(opts.seed)
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        u = u * (1.0 + opts.perturbation * noise / np.sqrt(2.0))
    return project_sphere(grid, u, c)


class _Preconditioner:
    """``(a + V)^-1/2 (a - Lap/2)^-1 (a + V)^-1/2`` with the shift set by the chemical potential."""

    def __init__(self, grid):
        self.grid = grid

    def __call__(self, r, shift):
        g = self.grid
        left = 1.0 / np.sqrt(shift + g.trap)
        y = ifftn(fftn(left * r) / (shift + 0.5 * g.xi_squared))
        if not np.iscomplexobj(r):
            y = y.real
        return left * y


def minimize(params, grid, opts=None):
    """Ground state of the energy at mass ``params.mass_c**2``.

    Raises :class:`UnstableRegimeError` outside the stable regime.  If
    ``max_iters`` is reached first, the best iterate is returned with
    ``converged=False``.
    """
    opts = SolverOptions() if opts is None else opts
    regime = classify(params.lambda1, params.lambda2)
    if not regime.stable:
        raise UnstableRegimeError(regime)

    c = params.mass_c
    mass = c * c
    precond = _Preconditioner(grid)
    u = initial_state(grid, c, opts)

    E = energy_direct(grid, u, params)
    history = [E]
    tau = opts.step_init
    it = 0
    G = energy_gradient(grid, u, params)
    for it in range(1, opts.max_iters + 1):
        mu = chemical_potential(grid, u, params, gradient=G)
        r = G + mu * u
        res = np.sqrt(l2_norm_sq(grid, r) / mass)
        if res <= opts.tol_residual:
            it -= 1
            break
        d = precond(r, shift=max(-mu, 0.5))
        # first-order decrease of E along the projected step, per unit tau
        slope = 2.0 * inner(grid, r, d).real
        noise = _ROUNDOFF * max(abs(E), 1.0)
        tau = min(tau / opts.backtrack_factor, _MAX_STEP)
        G_trial = None
        while tau >= _MIN_STEP:
            trial = project_sphere(grid, u - tau * d, c)
            E_trial = energy_direct(grid, trial, params)
            if E_trial <= E - _ARMIJO * tau * slope:
                break
            if tau * slope < noise and E_trial <= E + noise:
                # energy changes are below roundoff: require the residual to drop instead
                G_trial = energy_gradient(grid, trial, params)
                mu_trial = chemical_potential(grid, trial, params, gradient=G_trial)
                if el_residual(grid, trial, mu_trial, params, gradient=G_trial) < res:
                    break
                G_trial = None
            tau *= opts.backtrack_factor
        if tau < _MIN_STEP:
            log.info("line search stalled at iteration %d (residual %.3e)", it, res)
            it -= 1
            break
        u, E = trial, E_trial
        history.append(E)
        G = energy_gradient(grid, u, params) if G_trial is None else G_trial

    G = energy_gradient(grid, u, params)
    mu = chemical_potential(grid, u, params, gradient=G)
    residual = el_residual(grid, u, mu, params, gradient=G)
    converged = residual <= opts.tol_residual
    if not converged:
        warnings.warn(
            f"ground state not converged: residual {residual:.3e} > {opts.tol_residual:.1e} "
            f"after {it} iterations",
            RuntimeWarning,
            stacklevel=2,
        )
    state = phase_align(grid, u)
    if not np.iscomplexobj(u):
        state = state.real
    return GroundStateResult(
        state=state,
        energy=float(history[-1]),
        mu=float(mu),
        residual=float(residual),
        iterations=it,
        energy_history=history,
        converged=converged,
    )


def _reflect(f, axis):
    # node -L + k h maps to -L + (n - k) h under x -> -x
    return np.roll(np.flip(f, axis=axis), 1, axis=axis)


@dataclass
class SymmetryCertificate:
    """Deviations of a field from the symmetries of the trapped dipolar minimizer.

    ``rotation`` and ``reflection`` are max-norm defects of ``|u|``;
    ``x1_increase`` and ``x3_increase`` are the largest step-to-step increases of
    ``|u|`` walking outward from the origin along the positive axes.
    """

    rotation: float
    reflection: float
    x1_increase: float
    x3_increase: float

    def passed(self, sym_tol=1e-5, step_tol=1e-7):
        return (self.rotation <= sym_tol and self.reflection <= sym_tol
                and max(self.x1_increase, self.x3_increase) <= step_tol)


def symmetry_certificate(grid, u):
    """Check quarter-turn invariance about x3, evenness in x3 and outward decay."""
    grid.check(u)
    a = np.abs(np.asarray(u))
    if not a.any():
        raise ValueError("symmetry of the zero field is not informative")
    n1, n2, n3 = grid.dims
    if n1 == n2 and grid.box_half_lengths[0] == grid.box_half_lengths[1]:
        # (x1, x2) -> (x2, -x1)
        turned = _reflect(np.swapaxes(a, 0, 1), 1)
        rotation = float(np.max(np.abs(turned - a)))
    else:
        rotation = float("nan")
    reflection = float(np.max(np.abs(_reflect(a, 2) - a)))
    o1, o2, o3 = n1 // 2, n2 // 2, n3 // 2
    along1 = a[o1:, o2, o3]
    along3 = a[o1, o2, o3:]
    return SymmetryCertificate(
        rotation=rotation,
        reflection=reflection,
        x1_increase=float(max(np.max(np.diff(along1)), 0.0)),
        x3_increase=float(max(np.max(np.diff(along3)), 0.0)),
    )
