"""Dipole-dipole interaction with the dipole axis along x3.

The kernel ``(1 - 3 cos^2 theta) / |x|^3`` is never tabulated in real space;
its Fourier multiplier is exact and bounded, so the convolution is evaluated
spectrally.
"""

from __future__ import annotations

import numpy as np

from .spectral import fftn, irfftn, rfftn

__all__ = ["KHAT_MIN", "KHAT_MAX", "DIPOLE_AXIS", "khat", "khat_on_grid",
           "dipole_potential", "dipole_quadratic"]

KHAT_MIN = -4.0 * np.pi / 3.0
KHAT_MAX = 8.0 * np.pi / 3.0
DIPOLE_AXIS = (0.0, 0.0, 1.0)


def khat(xi):
    """Multiplier ``(4 pi / 3) (2 xi3^2 - xi1^2 - xi2^2) / |xi|^2``.

    ``xi`` is a triple or an array whose last axis has length 3.  The value at
    ``xi = 0`` is defined as 0.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != 3:
        raise ValueError("khat expects frequency triples along the last axis")
    return _khat(xi[..., 0], xi[..., 1], xi[..., 2])


def _khat(k1, k2, k3):
    perp = k1 * k1 + k2 * k2
    par = k3 * k3
    total = perp + par
    safe = np.where(total > 0, total, 1.0)
    out = np.where(total > 0, (4.0 * np.pi / 3.0) * (2.0 * par - perp) / safe, 0.0)
    return out[()] if out.ndim == 0 else out


_cache = {}


def khat_on_grid(grid, half=False):
    """Multiplier sampled on the grid frequencies in unshifted FFT order.

    With ``half=True`` only the non-negative x3 frequencies are returned, the
    layout of real-input transforms.
    """
    key = (grid, half)
    if key not in _cache:
        k1, k2, k3 = grid._fft_frequencies
        if half:
            k3 = k3[: grid.dims[2] // 2 + 1]
        _cache[key] = _khat(k1[:, None, None], k2[None, :, None], k3[None, None, :])
    return _cache[key]


def dipole_potential(grid, rho):
    """``K * rho`` for a real field ``rho``.

    The multiplier is even in every frequency component, so a real-input
    transform pair keeps the result exactly real.
    """
    grid.check(rho)
    rho = np.asarray(rho)
    if np.iscomplexobj(rho):
        if np.max(np.abs(rho.imag)) > 1e-10 * max(np.max(np.abs(rho.real)), 1.0):
            raise ValueError("dipole_potential expects a real density")
        rho = rho.real
    return irfftn(khat_on_grid(grid, half=True) * rfftn(rho), grid.shape)


def dipole_quadratic(grid, rho):
    """``(2 pi)^-3 int khat(xi) |rho_hat(xi)|^2 dxi`` by frequency quadrature."""
    grid.check(rho)
    rh = fftn(rho)
    return float(np.sum(khat_on_grid(grid) * np.abs(rh) ** 2) * grid.cell_volume / grid.size)
