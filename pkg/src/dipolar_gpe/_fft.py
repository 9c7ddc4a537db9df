"""Preplanned 3-D transforms for the time-stepping hot loop.

FFTW (through pyfftw) is used when importable, with deterministic
``FFTW_ESTIMATE`` plans; otherwise scipy.fft.  Both give the unnormalized
forward DFT and the normalized inverse.
"""

from __future__ import annotations

import numpy as np

from .spectral import _workers, fftn, ifftn, irfftn, rfftn

try:
    import pyfftw
except ImportError:  # pragma: no cover - exercised only without pyfftw
    pyfftw = None


class _ScipyPlans:
    def __init__(self, grid):
        self.shape = grid.shape
        self.field = np.zeros(grid.shape, dtype=complex)
        self.spectrum = None

    def forward(self):
        self.spectrum = fftn(self.field)
        return self.spectrum

    def backward(self):
        self.field[...] = ifftn(self.spectrum)

    def convolve_real(self, rho, mult):
        return irfftn(mult * rfftn(rho), self.shape)


class _FFTWPlans:
    def __init__(self, grid):
        shape = grid.shape
        half = shape[:2] + (shape[2] // 2 + 1,)
        self.shape = shape
        kw = dict(axes=(0, 1, 2), flags=("FFTW_ESTIMATE",), threads=_workers())
        self.field = pyfftw.zeros_aligned(shape, dtype="complex128")
        self.spectrum = pyfftw.zeros_aligned(shape, dtype="complex128")
        self._fwd = pyfftw.FFTW(self.field, self.spectrum, **kw)
        self._bwd = pyfftw.FFTW(self.spectrum, self.field, direction="FFTW_BACKWARD", **kw)
        self._real = pyfftw.zeros_aligned(shape, dtype="float64")
        self._real_hat = pyfftw.zeros_aligned(half, dtype="complex128")
        self._rfwd = pyfftw.FFTW(self._real, self._real_hat, **kw)
        self._rbwd = pyfftw.FFTW(self._real_hat, self._real, direction="FFTW_BACKWARD", **kw)

    def forward(self):
        self._fwd()
        return self.spectrum

    def backward(self):
        # c2c backward plans leave the spectrum intact
        self._bwd()

    def convolve_real(self, rho, mult):
        """Result lives in an internal buffer, valid until the next call."""
        self._real[...] = rho
        self._rfwd()
        self._real_hat *= mult
        # c2r transforms overwrite their input, which is scratch here
        self._rbwd()
        return self._real


def make_fft_plans(grid):
    return _FFTWPlans(grid) if pyfftw is not None else _ScipyPlans(grid)
