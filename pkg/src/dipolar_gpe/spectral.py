"""Uniform periodic 3-D grid, Fourier transforms and the norms built on them.

Fields are plain numpy arrays of shape ``grid.shape == (n1, n2, n3)`` indexed
``[i1, i2, i3]``.  The canonical flat layout (x1 varies fastest) is
``field.ravel(order="F")``.

The continuous transform is ``F u(xi) = int exp(-i x.xi) u(x) dx``; the discrete
version is the DFT scaled by the cell volume, with the ``(2 pi)^-3`` factor on
the inverse and in every frequency-domain quadrature.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid3D",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "l2_norm_sq",
    "inner",
    "grad_norm_sq",
    "xweighted_norm_sq",
    "sigma_norm_sq",
    "sigma_inner",
    "check_decay",
]

DECAY_TOLERANCE = 1e-10


def _workers():
    env = os.environ.get("GPE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def fftn(a):
    return sfft.fftn(a, workers=_workers())


def ifftn(a):
    return sfft.ifftn(a, workers=_workers())


def rfftn(a):
    return sfft.rfftn(a, workers=_workers())


def irfftn(a, shape):
    return sfft.irfftn(a, s=shape, workers=_workers())


@dataclass(frozen=True)
class Grid3D:
    """Periodic box ``prod [-L_j, L_j)`` sampled with ``n_j`` nodes per axis.

    Use :func:`make_grid` to construct a validated instance.
    """

    dims: tuple[int, int, int]
    box_half_lengths: tuple[float, float, float]

    @property
    def shape(self):
        return self.dims

    @property
    def size(self):
        return int(np.prod(self.dims))

    @cached_property
    def spacing(self):
        return tuple(2.0 * L / n for n, L in zip(self.dims, self.box_half_lengths))

    @cached_property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @cached_property
    def axes(self):
        """Node coordinates ``-L_j + k h_j`` per axis."""
        return tuple(
            -L + np.arange(n) * h
            for n, L, h in zip(self.dims, self.box_half_lengths, self.spacing)
        )

    @cached_property
    def frequencies(self):
        """Signed frequencies per axis in ascending (shifted) order."""
        return tuple(
            np.pi / L * np.arange(-n // 2, n // 2)
            for n, L in zip(self.dims, self.box_half_lengths)
        )

    @cached_property
    def _fft_frequencies(self):
        # same set as `frequencies`, in the unshifted order scipy.fft uses
        return tuple(
            np.pi / L * np.round(sfft.fftfreq(n) * n)
            for n, L in zip(self.dims, self.box_half_lengths)
        )

    @cached_property
    def _fft_signs(self):
        # exp(i L xi) = (-1)^m on the frequency xi = pi m / L
        return tuple(
            1.0 - 2.0 * (np.abs(np.round(sfft.fftfreq(n) * n)) % 2) for n in self.dims
        )

    def mesh(self):
        return np.meshgrid(*self.axes, indexing="ij")

    @cached_property
    def r_squared(self):
        x1, x2, x3 = self.axes
        return x1[:, None, None] ** 2 + x2[None, :, None] ** 2 + x3[None, None, :] ** 2

    @cached_property
    def trap(self):
        """Harmonic confinement ``|x|^2 / 2``."""
        return 0.5 * self.r_squared

    @cached_property
    def xi_squared(self):
        """``|xi|^2`` in unshifted FFT order."""
        k1, k2, k3 = self._fft_frequencies
        return k1[:, None, None] ** 2 + k2[None, :, None] ** 2 + k3[None, None, :] ** 2

    @cached_property
    def xi_squared_half(self):
        """``|xi|^2`` on the half spectrum used by real transforms."""
        n3 = self.dims[2]
        return self.xi_squared[:, :, : n3 // 2 + 1]

    def check(self, *fields):
        for f in fields:
            if np.shape(f) != self.shape:
                raise ValueError(
                    f"field of shape {np.shape(f)} does not live on grid {self.shape}"
                )


def make_grid(dims, box_half_lengths):
    """Build a :class:`Grid3D`.

    ``dims`` must be even and at least 8 on every axis; ``box_half_lengths``
    may be a scalar (cubic box) or a triple.
    """
    dims = tuple(int(n) for n in np.broadcast_to(np.asarray(dims), (3,)))
    lengths = tuple(float(L) for L in np.broadcast_to(np.asarray(box_half_lengths, float), (3,)))
    for n in dims:
        if n < 8 or n % 2:
            raise ValueError(f"grid dims must be even and >= 8, got {dims}")
    for L in lengths:
        if not (np.isfinite(L) and L > 0):
            raise ValueError(f"box half-lengths must be positive, got {lengths}")
    return Grid3D(dims, lengths)


def _phase(grid, a):
    s1, s2, s3 = grid._fft_signs
    # the signs are +-1, so they are their own inverse
    return a * s1[:, None, None] * s2[None, :, None] * s3[None, None, :]


def forward_transform(grid, f):
    """Quadrature of ``int exp(-i x.xi) f(x) dx`` at ``grid.frequencies``."""
    grid.check(f)
    coef = _phase(grid, fftn(f)) * grid.cell_volume
    return sfft.fftshift(coef)


def inverse_transform(grid, fhat):
    """Inverse of :func:`forward_transform` (carries the ``(2 pi)^-3`` factor)."""
    grid.check(fhat)
    coef = _phase(grid, sfft.ifftshift(fhat))
    return ifftn(coef) / grid.cell_volume


def apply_multiplier(grid, f, multiplier):
    """Apply a Fourier multiplier given in unshifted FFT order."""
    return ifftn(multiplier * fftn(f))


def inner(grid, f, g):
    """L2 inner product ``int conj(f) g``."""
    grid.check(f, g)
    return complex(np.vdot(f, g) * grid.cell_volume)


def l2_norm_sq(grid, f):
    grid.check(f)
    return float(np.sum(np.abs(f) ** 2) * grid.cell_volume)


def grad_norm_sq(grid, f):
    """``||grad f||_2^2`` through the multiplier ``|xi|^2`` (Plancherel)."""
    grid.check(f)
    fh = fftn(f)
    return float(np.sum(grid.xi_squared * np.abs(fh) ** 2) * grid.cell_volume / grid.size)


def xweighted_norm_sq(grid, f):
    grid.check(f)
    return float(np.sum(grid.r_squared * np.abs(f) ** 2) * grid.cell_volume)


def sigma_norm_sq(grid, f):
    """``||x f||^2 + ||grad f||^2 + ||f||^2``."""
    return xweighted_norm_sq(grid, f) + grad_norm_sq(grid, f) + l2_norm_sq(grid, f)


def sigma_inner(grid, f, g):
    """Inner product inducing :func:`sigma_norm_sq`, conjugate-linear in ``f``."""
    grid.check(f, g)
    dv = grid.cell_volume
    plain = np.vdot(f, g) * dv
    weighted = np.vdot(f, grid.r_squared * g) * dv
    fh, gh = fftn(f), fftn(g)
    grad = np.vdot(fh, grid.xi_squared * gh) * dv / grid.size
    return complex(plain + weighted + grad)


def boundary_max(grid, f):
    """Largest modulus on the outer faces of the box."""
    a = np.abs(np.asarray(f))
    return float(max(a[0].max(), a[:, 0].max(), a[:, :, 0].max(),
                     a[-1].max(), a[:, -1].max(), a[:, :, -1].max()))


def check_decay(grid, f, tol=DECAY_TOLERANCE):
    """Warn when ``f`` has not decayed below ``tol`` (relative) at the box edge.

    Returns True when the field is acceptably localized.
    """
    peak = float(np.max(np.abs(f)))
    if peak == 0.0:
        return True
    edge = boundary_max(grid, f) / peak
    if edge > tol:
        warnings.warn(
            f"field is {edge:.2e} of its peak at the box boundary; "
            "periodization of the box may bias results",
            RuntimeWarning,
            stacklevel=2,
        )
        return False
    return True
