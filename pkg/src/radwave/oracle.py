"""Brute-force reference integrator for small grids (tests only).

Classical RK4 in time on the full right-hand side, with centred finite
differences in space for both the Laplacian and the velocity.  None of
the production spectral or splitting machinery is used; only the memory
rule (integrand, backward-difference acceleration, trapezoid update) is
shared, since that rule is part of the model rather than the solver.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissipation import DissipationModel, integrand
from .grid import Grid
from .madelung import DEFAULT_DENSITY_FLOOR, memory_acceleration, memory_weight
from .memory import WorkField, update_work

MAX_POINTS = 128
STABILITY_FACTOR = 0.2


@dataclass(frozen=True, eq=False)
class OracleConfig:
    grid: Grid
    psi0: np.ndarray
    dt: float
    potential: np.ndarray | None = None
    model: DissipationModel = DissipationModel()
    hbar: float = 1.0
    mass: float = 1.0
    density_floor: float = DEFAULT_DENSITY_FLOOR

    def __post_init__(self):
        n = self.grid.n_points
        if n > MAX_POINTS:
            raise ValueError(f"oracle grids are limited to {MAX_POINTS} points")
        if np.shape(self.psi0) != (n,):
            raise ValueError("psi0 does not match the grid")
        if self.potential is None:
            object.__setattr__(self, "potential", np.zeros(n))
        limit = STABILITY_FACTOR * self.grid.dx ** 2 * self.mass / self.hbar
        if not 0 < self.dt <= limit:
            raise ValueError(
                f"dt={self.dt:.4g} violates the explicit stability guard "
                f"0 < dt <= {limit:.4g}")


def _second_difference(psi, dx):
    return (np.roll(psi, -1) - 2.0 * psi + np.roll(psi, 1)) / dx ** 2


def _fd_velocity(psi, dx, hbar, mass, floor):
    """Centred-difference current over density, zero below the floor."""
    rho = np.abs(psi) ** 2
    v = np.zeros(psi.shape)
    peak = rho.max()
    if peak <= 0:
        return v, np.zeros(psi.shape, dtype=bool)
    mask = rho >= floor * peak
    dpsi = (np.roll(psi, -1) - np.roll(psi, 1)) / (2.0 * dx)
    v[mask] = hbar / mass * np.imag(np.conj(psi[mask]) * dpsi[mask]) / rho[mask]
    return v, mask


@dataclass(frozen=True, eq=False)
class OracleResult:
    psi: np.ndarray
    work: WorkField
    v_init: np.ndarray
    v_final: np.ndarray
    flow_always: np.ndarray  # density above floor at every step


def rk4_reference(config: OracleConfig, n_steps: int) -> np.ndarray:
    """Final wavefunction after ``n_steps`` RK4 steps."""
    return rk4_run(config, n_steps).psi


def rk4_run(config: OracleConfig, n_steps: int,
            flow_margin: float = 1.0) -> OracleResult:
    """RK4 integration returning the wavefunction and the memory field.

    Within a step the memory field is extrapolated linearly from its last
    rate, ``W(t_n + c dt) = W_n + c dt g_n``, which keeps the scheme
    second-order in time; ``W`` itself is advanced once per step with the
    production memory rule.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    cfg = config
    dx, dt, hbar, mass = cfg.grid.dx, cfg.dt, cfg.hbar, cfg.mass
    coef = hbar / (2.0 * mass)

    def rhs(psi, w):
        return -1j * (-coef * _second_difference(psi, dx)
                      + (cfg.potential + w) * psi / hbar)

    psi = np.array(cfg.psi0, dtype=complex)
    v_prev, m_prev = _fd_velocity(psi, dx, hbar, mass, cfg.density_floor)
    g0 = integrand(cfg.model, v_prev, np.zeros_like(v_prev))
    work = WorkField.starting(g0 * memory_weight(np.abs(psi) ** 2, cfg.density_floor))
    v_init = v_prev.copy()
    v_prev2 = m_prev2 = None
    always = np.abs(psi) ** 2 >= flow_margin * cfg.density_floor * np.max(np.abs(psi) ** 2)
    for n in range(n_steps):
        w0, g0 = work.w, work.g_prev
        w_half = w0 + 0.5 * dt * g0
        w_full = w0 + dt * g0
        k1 = rhs(psi, w0)
        k2 = rhs(psi + 0.5 * dt * k1, w_half)
        k3 = rhs(psi + 0.5 * dt * k2, w_half)
        k4 = rhs(psi + dt * k3, w_full)
        psi = psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(psi)):
            raise FloatingPointError(f"oracle produced non-finite values at step {n + 1}")

        v, m = _fd_velocity(psi, dx, hbar, mass, cfg.density_floor)
        a = memory_acceleration((v, v_prev, v_prev2), (m, m_prev, m_prev2), dt)
        g = integrand(cfg.model, v, a) * memory_weight(np.abs(psi) ** 2, cfg.density_floor)
        work = update_work(work, g, dt)
        v_prev2, v_prev = v_prev, v
        m_prev2, m_prev = m_prev, m
        rho = np.abs(psi) ** 2
        always &= rho >= flow_margin * cfg.density_floor * rho.max()
    return OracleResult(psi, work, v_init, v_prev, always)
