"""Real-time propagation by Strang splitting and orbital-stability experiments.

One step of size dt is

    psi <- exp(-i dt/2 W) psi,   psi_hat <- exp(-i dt |xi|^2 / 2) psi_hat,
    psi <- exp(-i dt/2 W) psi

with ``W = |x|^2/2 + lambda1 |psi|^2 + lambda2 K*|psi|^2``.  ``W`` is real and
the multiplicative flow leaves ``|psi|`` unchanged, so both sub-flows are exact
and unitary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._fft import make_fft_plans
from .dipole import khat_on_grid
from .energy import energy_direct
from .groundstate import GroundStateResult, UnstableRegimeError, minimize
from .regimes import classify
from .spectral import fftn, ifftn, l2_norm_sq, sigma_inner, sigma_norm_sq

__all__ = [
    "DynamicsOptions",
    "StabilityReport",
    "BlowUpError",
    "SplitStepper",
    "strang_step",
    "propagate",
    "orbit_distance",
    "random_perturbation",
    "stability_experiment",
]

MONITORS = ("mass", "energy", "orbit_distance")
# steps between spectral-resolution checks
_CHECK_STRIDE = 10


@dataclass
class DynamicsOptions:
    """Time stepping and monitoring controls.

    ``snapshot_stride`` is the number of steps between recorded monitor rows
    (and stored snapshots).  A run is aborted as a blow-up when ``max|psi|``
    exceeds ``blowup_factor`` times its initial value, when a non-finite value
    appears, or when more than ``spectral_tail_limit`` of the mass sits in the
    outer third of the frequency box (the grid no longer resolves the solution).
    """

    dt: float = 1e-3
    t_final: float = 1.0
    snapshot_stride: int = 100
    monitors: tuple = MONITORS
    blowup_factor: float = 1e6
    spectral_tail_limit: float = 1e-3
    keep_snapshots: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_final >= self.dt:
            raise ValueError("t_final must be at least dt")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")
        unknown = set(self.monitors) - set(MONITORS)
        if unknown:
            raise ValueError(f"unknown monitors {sorted(unknown)}")

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))


@dataclass
class StabilityReport:
    times: np.ndarray
    mass_series: np.ndarray
    energy_series: np.ndarray
    orbit_distance_series: np.ndarray
    sup_orbit_distance: float
    initial_sigma_distance: float
    final_state: np.ndarray = field(repr=False, default=None)
    snapshots: list = field(repr=False, default_factory=list)

    @property
    def mass_drift(self):
        m = self.mass_series
        return float(np.max(np.abs(m - m[0])) / m[0])

    @property
    def energy_drift(self):
        e = self.energy_series
        return float(np.max(np.abs(e - e[0])))


class BlowUpError(RuntimeError):
    """Propagation stopped because the solution left the resolvable regime."""

    def __init__(self, time, reason, state=None, report=None):
        super().__init__(f"blow-up detected at t={time:.6g}: {reason}")
        self.time = time
        self.reason = reason
        self.state = state
        self.report = report


class SplitStepper:
    """In-place Strang stepper with preallocated buffers.

    Consecutive steps share the multiplicative half-step phase: ``W`` at the end
    of one step is also ``W`` at the start of the next, since ``|psi|`` is the
    same.
    """

    def __init__(self, grid, params, dt):
        self.grid = grid
        self.params = params
        self.dt = dt
        self.fft = make_fft_plans(grid)
        self.kinetic = np.exp(-0.5j * dt * grid.xi_squared)
        self.half_trap = -0.5 * dt * grid.trap
        self.contact = -0.5 * dt * params.lambda1
        # dipolar multiplier with the half-step factor folded in
        self.khat = (-0.5 * dt * params.lambda2) * khat_on_grid(grid, half=True)
        self.phase = np.empty(grid.shape, dtype=complex)
        self.rho = np.empty(grid.shape)
        self._arg = np.empty(grid.shape)
        self._fresh = True

    def load(self, psi):
        self.fft.field[...] = psi
        self._fresh = True

    @property
    def psi(self):
        return self.fft.field

    def _update_phase(self):
        f, rho, arg = self.fft.field, self.rho, self._arg
        np.multiply(f.real, f.real, out=rho)
        np.multiply(f.imag, f.imag, out=arg)
        rho += arg
        np.multiply(rho, self.contact, out=arg)
        arg += self.half_trap
        if self.params.lambda2 != 0.0:
            arg += self.fft.convolve_real(rho, self.khat)
        np.cos(arg, out=self.phase.real)
        np.sin(arg, out=self.phase.imag)

    def step(self):
        """Advance the loaded state by one step; returns the Fourier coefficients
        after the kinetic sub-step (unnormalized FFT order)."""
        f = self.fft.field
        if self._fresh:
            self._update_phase()
            self._fresh = False
        f *= self.phase
        spec = self.fft.forward()
        spec *= self.kinetic
        self.fft.backward()
        self._update_phase()
        f *= self.phase
        return spec


def strang_step(grid, psi, dt, params):
    """Advance ``psi`` by one symmetric splitting step of size ``dt`` (may be negative)."""
    grid.check(psi)
    stepper = SplitStepper(grid, params, dt)
    stepper.load(psi)
    stepper.step()
    return stepper.psi.copy()


def orbit_distance(grid, psi, w):
    """``min_theta ||psi - exp(i theta) w||_Sigma``.

    The minimizing phase is ``arg <w, psi>_Sigma``; the distance is then
    evaluated directly rather than through the polarization identity, which
    would lose half the digits near zero.
    """
    grid.check(psi, w)
    if sigma_norm_sq(grid, w) == 0.0:
        raise ValueError("orbit of the zero field is degenerate")
    z = sigma_inner(grid, w, psi)
    rot = z / abs(z) if z != 0 else 1.0
    return float(np.sqrt(sigma_norm_sq(grid, psi - rot * w)))


def _tail_mask(grid):
    masks = []
    for k, n, L in zip(grid._fft_frequencies, grid.dims, grid.box_half_lengths):
        masks.append(np.abs(k) > (2.0 / 3.0) * np.pi * (n // 2) / L)
    return masks[0][:, None, None] | masks[1][None, :, None] | masks[2][None, None, :]


def propagate(grid, psi0, params, opts, reference=None):
    """Integrate from ``psi0`` over ``[0, opts.t_final]``.

    ``reference`` is the standing wave whose phase orbit the orbit distance is
    measured against.  Raises :class:`BlowUpError` (with the partial report
    attached) when a blow-up trigger fires.
    """
    grid.check(psi0)
    psi0 = np.asarray(psi0)
    n_steps = opts.n_steps
    tail = _tail_mask(grid)
    want_orbit = reference is not None and "orbit_distance" in opts.monitors

    times, masses, energies, dists, snaps = [], [], [], [], []

    def record(t, state):
        times.append(t)
        masses.append(l2_norm_sq(grid, state) if "mass" in opts.monitors else np.nan)
        energies.append(energy_direct(grid, state, params) if "energy" in opts.monitors else np.nan)
        dists.append(orbit_distance(grid, state, reference) if want_orbit else np.nan)
        if opts.keep_snapshots:
            snaps.append((t, state.copy()))

    def report(state):
        d = np.array(dists)
        return StabilityReport(
            times=np.array(times),
            mass_series=np.array(masses),
            energy_series=np.array(energies),
            orbit_distance_series=d,
            sup_orbit_distance=float(np.max(d)) if want_orbit else float("nan"),
            initial_sigma_distance=(
                float(np.sqrt(sigma_norm_sq(grid, psi0 - reference)))
                if reference is not None else float("nan")
            ),
            final_state=state.copy(),
            snapshots=snaps,
        )

    stepper = SplitStepper(grid, params, opts.dt)
    stepper.load(psi0)
    psi = stepper.psi
    peak0 = float(np.max(np.abs(psi0)))
    record(0.0, psi)
    for step in range(1, n_steps + 1):
        t = step * opts.dt
        spec = stepper.step()
        if step % _CHECK_STRIDE == 0 or step == n_steps:
            power = spec.real ** 2 + spec.imag ** 2
            total = power.sum()
            if not np.isfinite(total):
                raise BlowUpError(t, "non-finite values", psi.copy(), report(psi))
            if power[tail].sum() > opts.spectral_tail_limit * total:
                raise BlowUpError(t, "solution no longer resolved by the grid",
                                  psi.copy(), report(psi))
        peak = np.sqrt(stepper.rho.max())
        if not np.isfinite(peak):
            raise BlowUpError(t, "non-finite values", psi.copy(), report(psi))
        if peak > opts.blowup_factor * peak0:
            raise BlowUpError(t, f"amplitude grew by more than {opts.blowup_factor:g}",
                              psi.copy(), report(psi))
        if step % opts.snapshot_stride == 0 or step == n_steps:
            record(t, psi)
    return report(psi)


def random_perturbation(grid, w, seed=0):
    """Smooth, localized random complex field, L2-orthogonal to ``w``, unit Sigma norm."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    smooth = ifftn(np.exp(-0.5 * grid.xi_squared) * fftn(noise))
    p = smooth * np.exp(-0.25 * grid.r_squared)
    w = np.asarray(w)
    p = p - (np.vdot(w, p) / np.vdot(w, w)) * w
    return p / np.sqrt(sigma_norm_sq(grid, p))


def stability_experiment(params, grid, delta, opts, ground=None, seed=0, solver_options=None):
    """Propagate ``w + delta p`` and track the Sigma distance to the orbit of ``w``.

    ``w`` is the ground state (computed unless ``ground`` is given) and ``p`` a
    unit-Sigma-norm random perturbation from :func:`random_perturbation`.
    """
    regime = classify(params.lambda1, params.lambda2)
    if not regime.stable:
        raise UnstableRegimeError(regime)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if ground is None:
        ground = minimize(params, grid, solver_options)
    w = ground.state if isinstance(ground, GroundStateResult) else np.asarray(ground)
    psi0 = w + delta * random_perturbation(grid, w, seed) if delta > 0 else np.array(w, dtype=complex)
    return propagate(grid, psi0, params, opts, reference=w)
