"""Uniform periodic 1D grid and its Fourier wavenumber ladder."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Grid:
    """Periodic grid on ``[x_min, x_max)`` with ``n_points`` samples.

    ``x_max`` is identified with ``x_min``; the last sample sits at
    ``x_max - dx``.
    """

    n_points: int
    x_min: float
    x_max: float
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n_points
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise TypeError(f"n_points must be an integer, got {n!r}")
        if n < 8 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 8, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError(
                f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        length = self.x_max - self.x_min
        dx = length / n
        x = self.x_min + dx * np.arange(n)
        k = 2.0 * np.pi * np.fft.fftfreq(n, d=1.0 / n) / length
        x.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "n_points", int(n))
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "wavenumbers", k)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    def integrate(self, values: np.ndarray) -> float:
        """Trapezoid quadrature; on a periodic grid this is ``sum * dx``."""
        return float(np.sum(values) * self.dx)


def make_grid(n_points: int, x_min: float, x_max: float) -> Grid:
    return Grid(n_points, float(x_min), float(x_max))


def _check_length(grid: Grid, arr: np.ndarray, name: str = "field"):
    if np.shape(arr) != (grid.n_points,):
        raise ValueError(
            f"{name} has shape {np.shape(arr)}, expected ({grid.n_points},)")


def spectral_derivative(grid: Grid, field: np.ndarray) -> np.ndarray:
    """First derivative ``ifft(i k fft(f))``; exact for band-limited periodic f."""
    _check_length(grid, field)
    return np.fft.ifft(1j * grid.wavenumbers * np.fft.fft(field))


def real_spectral_derivative(grid: Grid, field: np.ndarray) -> np.ndarray:
    """First derivative of a real field, returned as a real array.

    The Nyquist coefficient is dropped (its derivative is not real).
    """
    _check_length(grid, field)
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n_points, d=grid.dx)
    coeffs = 1j * k * np.fft.rfft(field)
    if grid.n_points % 2 == 0:
        coeffs[-1] = 0.0
    return np.fft.irfft(coeffs, n=grid.n_points)
