"""Gross-Pitaevskii energy with contact and dipolar interactions.

    E(u) = 1/2 ||grad u||^2 + 1/2 int |x|^2 |u|^2
           + lambda1/2 int |u|^4 + lambda2/2 int (K * |u|^2) |u|^2

The only confining potential implemented is the harmonic trap ``grid.trap``;
any radially increasing potential could be substituted there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dipole import dipole_potential, khat_on_grid
from .spectral import apply_multiplier, fftn, grad_norm_sq, inner, l2_norm_sq

__all__ = [
    "PhysicsParams",
    "UndefinedFunctionalError",
    "energy_terms",
    "energy_direct",
    "energy_fourier",
    "energy_gradient",
    "chemical_potential",
    "el_residual",
    "weinstein",
]


@dataclass(frozen=True)
class PhysicsParams:
    """Contact strength, dipole strength and mass constraint ``||u||_2 = mass_c``."""

    lambda1: float
    lambda2: float
    mass_c: float = 1.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "mass_c"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.mass_c <= 0:
            raise ValueError(f"mass_c must be positive, got {self.mass_c}")


class UndefinedFunctionalError(ValueError):
    """Raised when the Weinstein quotient has a non-positive denominator."""


def _nonzero_mass(grid, u):
    m = l2_norm_sq(grid, u)
    if m == 0.0:
        raise ValueError("field is identically zero")
    return m


def energy_terms(grid, u, params):
    """Kinetic, trap, contact and dipolar parts of the energy (real space)."""
    grid.check(u)
    rho = np.abs(u) ** 2
    dv = grid.cell_volume
    return {
        "kinetic": 0.5 * grad_norm_sq(grid, u),
        "trap": float(np.sum(grid.trap * rho) * dv),
        "contact": 0.5 * params.lambda1 * float(np.sum(rho * rho) * dv),
        "dipolar": 0.5 * params.lambda2 * float(np.sum(dipole_potential(grid, rho) * rho) * dv),
    }


def energy_direct(grid, u, params):
    return float(sum(energy_terms(grid, u, params).values()))


def energy_fourier(grid, u, params):
    """Energy with both interactions as one quadrature over ``|rho_hat|^2``."""
    grid.check(u)
    rho = np.abs(u) ** 2
    weight = params.lambda1 + params.lambda2 * khat_on_grid(grid)
    interaction = np.sum(weight * np.abs(fftn(rho)) ** 2) * grid.cell_volume / grid.size
    trap = np.sum(grid.trap * rho) * grid.cell_volume
    return float(0.5 * grad_norm_sq(grid, u) + trap + 0.5 * interaction)


def mean_field(grid, u, params):
    """Real multiplicative potential ``|x|^2/2 + lambda1 |u|^2 + lambda2 K*|u|^2``."""
    rho = np.abs(u) ** 2
    W = grid.trap + params.lambda1 * rho
    if params.lambda2 != 0.0:
        W = W + params.lambda2 * dipole_potential(grid, rho)
    return W


def energy_gradient(grid, u, params):
    """``-1/2 Lap u + |x|^2/2 u + lambda1 |u|^2 u + lambda2 (K*|u|^2) u``.

    This is the gradient of E with respect to the real inner product
    ``2 Re <., .>``, i.e. ``dE(u)[v] = 2 Re <G(u), v>``.
    """
    grid.check(u)
    lap = apply_multiplier(grid, u, 0.5 * grid.xi_squared)
    if not np.iscomplexobj(u):
        lap = lap.real
    return lap + mean_field(grid, u, params) * u


def chemical_potential(grid, u, params, gradient=None):
    """``mu = -<G(u), u> / ||u||^2``; the standing wave is ``exp(i mu t) u``."""
    m = _nonzero_mass(grid, u)
    G = energy_gradient(grid, u, params) if gradient is None else gradient
    return -inner(grid, u, G).real / m


def el_residual(grid, u, mu, params, gradient=None):
    """``||G(u) + mu u||_2 / ||u||_2``."""
    m = _nonzero_mass(grid, u)
    G = energy_gradient(grid, u, params) if gradient is None else gradient
    return float(np.sqrt(l2_norm_sq(grid, G + mu * u) / m))


def weinstein(grid, v, lambda1, lambda2):
    """Weinstein quotient ``||grad v||^3 ||v|| / (-lambda1 ||v||_4^4 - lambda2 <K*|v|^2, |v|^2>)``.

    Raises :class:`UndefinedFunctionalError` when the denominator is not
    positive, which is always the case when the interaction is repulsive.
    """
    grid.check(v)
    rho = np.abs(v) ** 2
    dv = grid.cell_volume
    quartic = float(np.sum(rho * rho) * dv)
    dip = float(np.sum(dipole_potential(grid, rho) * rho) * dv) if lambda2 != 0 else 0.0
    denom = -lambda1 * quartic - lambda2 * dip
    if not denom > 0:
        raise UndefinedFunctionalError(
            f"Weinstein functional undefined: denominator {denom:.3e} <= 0"
        )
    return grad_norm_sq(grid, v) ** 1.5 * np.sqrt(l2_norm_sq(grid, v)) / denom
