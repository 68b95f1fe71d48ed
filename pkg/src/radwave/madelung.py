"""Hydrodynamic (Madelung) fields of a sampled wavefunction.

Writing ``psi = sqrt(rho) * exp(i S / hbar)`` the flow velocity is
``v = grad(S) / m``.  It is computed here as current over density,

    v = (hbar / m) * Im(conj(psi) * dpsi/dx) / |psi|**2,

which equals ``-i (hbar / 2m) d/dx ln(psi / conj(psi))`` identically but
never takes a logarithm, so no phase unwrapping or branch choice is needed.
Where the density drops below ``density_floor * max(rho)`` the phase carries
no information and the velocity is pinned to zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, _check_length, real_spectral_derivative

DEFAULT_DENSITY_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class MadelungFields:
    density: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    density_floor: float = DEFAULT_DENSITY_FLOOR


def density(psi: np.ndarray) -> np.ndarray:
    return psi.real ** 2 + psi.imag ** 2


def flow_mask(rho: np.ndarray, density_floor: float = DEFAULT_DENSITY_FLOOR):
    """Boolean mask of points where the velocity is defined."""
    peak = rho.max() if rho.size else 0.0
    if peak <= 0.0:
        return np.zeros(rho.shape, dtype=bool)
    return rho >= density_floor * peak


def velocity_field(psi: np.ndarray, grid: Grid,
                   density_floor: float = DEFAULT_DENSITY_FLOOR,
                   hbar: float = 1.0, mass: float = 1.0) -> np.ndarray:
    _check_length(grid, psi, "psi")
    if density_floor <= 0:
        raise ValueError("density_floor must be positive")
    psi = np.asarray(psi, dtype=complex)
    rho = density(psi)
    mask = flow_mask(rho, density_floor)
    v = np.zeros(grid.n_points)
    if not mask.any():
        return v
    # Im(psi* psi') from real derivatives, so a real psi carries no current
    re, im = psi.real, psi.imag
    current = (re * real_spectral_derivative(grid, im)
               - im * real_spectral_derivative(grid, re))
    v[mask] = (hbar / mass) * current[mask] / rho[mask]
    return v


def acceleration_field(v_now: np.ndarray, v_prev: np.ndarray,
                       dt: float) -> np.ndarray:
    """First-order backward difference ``(v_now - v_prev) / dt``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if np.shape(v_now) != np.shape(v_prev):
        raise ValueError("velocity arrays differ in shape")
    return (v_now - v_prev) / dt


def acceleration_field_bdf2(v_now: np.ndarray, v_prev: np.ndarray,
                            v_prev2: np.ndarray, dt: float) -> np.ndarray:
    """Second-order backward difference ``(3 v_n - 4 v_{n-1} + v_{n-2}) / 2dt``.

    The one-step difference is centred half a step behind ``v_now``; paired
    with trapezoid accumulation that lag makes the memory integral only
    first-order accurate.  The three-point stencil is centred on ``v_now``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not np.shape(v_now) == np.shape(v_prev) == np.shape(v_prev2):
        raise ValueError("velocity arrays differ in shape")
    return (3.0 * v_now - 4.0 * v_prev + v_prev2) / (2.0 * dt)


TAPER_DECADES = 3.0


def memory_weight(rho: np.ndarray, density_floor: float = DEFAULT_DENSITY_FLOOR,
                  decades: float = TAPER_DECADES) -> np.ndarray:
    """Weight in [0, 1] applied to the memory integrand.

    Zero below the density floor, one above ``10**decades`` times the
    floor, and a smoothstep in ``log10(rho)`` between.  Without the taper
    the hard velocity cutoff leaves a jump in the accumulated work at the
    edge of the flow region whose gradient kicks the low-density tail.
    """
    peak = rho.max() if rho.size else 0.0
    if peak <= 0.0:
        return np.zeros(rho.shape)
    with np.errstate(divide="ignore"):
        s = np.log10(rho / (density_floor * peak)) / decades
    s = np.clip(np.nan_to_num(s, neginf=0.0), 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


def memory_acceleration(velocities, masks, dt: float) -> np.ndarray:
    """Acceleration used by the memory integral at the newest time level.

    ``velocities`` and ``masks`` list the newest field first and hold two or
    three time levels.  The three-point difference is used where all three
    levels carry a defined velocity, the one-step difference where only the
    last two do, and zero elsewhere: a point that has just risen above the
    density floor has no velocity history, exactly as at the start of a run.
    """
    v_now, v_prev = velocities[0], velocities[1]
    ok_now = masks[0] & masks[1]
    a = np.where(ok_now, acceleration_field(v_now, v_prev, dt), 0.0)
    if len(velocities) > 2 and velocities[2] is not None:
        ok3 = ok_now & masks[2]
        a = np.where(ok3, acceleration_field_bdf2(v_now, v_prev, velocities[2], dt), a)
    return a


def madelung_fields(psi: np.ndarray, grid: Grid, v_prev: np.ndarray | None = None,
                    dt: float | None = None,
                    density_floor: float = DEFAULT_DENSITY_FLOOR,
                    hbar: float = 1.0, mass: float = 1.0) -> MadelungFields:
    """Density, velocity and (if ``v_prev`` is given) backward acceleration."""
    v = velocity_field(psi, grid, density_floor, hbar, mass)
    if v_prev is None:
        a = np.zeros_like(v)
    else:
        a = acceleration_field(v, v_prev, dt)
    return MadelungFields(density(psi), v, a, density_floor)
