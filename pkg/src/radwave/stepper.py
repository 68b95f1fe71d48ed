"""Time stepping for ``i hbar psi_t = [-(hbar^2/2m) d_xx + V + W] psi``.

Two independent schemes share the explicit memory update:

* :func:`strang_step` - half phase kick, exact kinetic propagation in
  Fourier space, half phase kick.  The first kick uses ``W(t_n)``, the
  second ``W(t_{n+1})``.
* :func:`cn_step` - Crank-Nicolson with a periodic second-difference
  Laplacian, using the memory field extrapolated to mid-step.  The cyclic
  tridiagonal system is solved directly in O(n).

Within a step ``W`` is frozen (explicit nonlinearity).  ``v`` at the new
time level is read off the wavefunction after both kicks have been applied
with the old ``W``; the remaining kick ``exp(-i (W_new - W_old) dt / 2 hbar)``
is then applied.  The final wavefunction equals the plain Strang update,
but the sampled velocity is second-order accurate in ``dt``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded

from .dissipation import DissipationModel, integrand
from .grid import Grid, _check_length
from .madelung import (DEFAULT_DENSITY_FLOOR, density, flow_mask,
                       memory_acceleration, memory_weight, velocity_field)
from .memory import WorkField, update_work

PHASE_STEP_LIMIT = np.pi / 4


class InstabilityError(RuntimeError):
    """Raised when a step produces non-finite values or violates the dt guard."""


@dataclass(frozen=True, eq=False)
class SimState:
    psi: np.ndarray
    grid: Grid
    potential: np.ndarray
    model: DissipationModel
    dt: float
    hbar: float = 1.0
    mass: float = 1.0
    t: float = 0.0
    steps: int = 0
    work: WorkField | None = None
    v_prev: np.ndarray | None = None
    v_prev2: np.ndarray | None = None
    flow_prev: np.ndarray | None = None
    flow_prev2: np.ndarray | None = None
    density_floor: float = DEFAULT_DENSITY_FLOOR
    self_consistent: int = 0

    def __post_init__(self):
        n = self.grid.n_points
        _check_length(self.grid, self.psi, "psi")
        _check_length(self.grid, self.potential, "potential")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")
        if self.self_consistent < 0:
            raise ValueError("self_consistent must be >= 0")
        if self.v_prev is None:
            object.__setattr__(self, "v_prev", self.velocity())
        if self.flow_prev is None:
            object.__setattr__(self, "flow_prev", self.flow_mask())
        if self.work is None:
            if self.model.is_linear:
                work = WorkField.zeros(n)
            else:
                # no velocity history yet, so a = 0 at t = 0
                g0 = integrand(self.model, self.v_prev, np.zeros(n))
                work = WorkField.starting(
                    g0 * memory_weight(density(self.psi), self.density_floor))
            object.__setattr__(self, "work", work)

    def velocity(self, psi: np.ndarray | None = None) -> np.ndarray:
        return velocity_field(self.psi if psi is None else psi, self.grid,
                              self.density_floor, self.hbar, self.mass)

    def flow_mask(self, psi: np.ndarray | None = None) -> np.ndarray:
        """Points where the velocity is defined (density above the floor)."""
        return flow_mask(density(self.psi if psi is None else psi),
                         self.density_floor)

    def acceleration(self, v_now: np.ndarray, mask_now: np.ndarray) -> np.ndarray:
        """Acceleration at the new time level from the stored velocities.

        One-step difference on the first step, three-point backward
        difference afterwards; see :func:`radwave.madelung.memory_acceleration`.
        """
        return memory_acceleration(
            (v_now, self.v_prev, self.v_prev2),
            (mask_now, self.flow_prev, self.flow_prev2), self.dt)

    @property
    def norm(self) -> float:
        return self.grid.integrate(np.abs(self.psi) ** 2)


def make_state(psi: np.ndarray, grid: Grid, potential: np.ndarray | None = None,
               model: DissipationModel | None = None, dt: float = 1e-3,
               **kwargs) -> SimState:
    if potential is None:
        potential = np.zeros(grid.n_points)
    if model is None:
        model = DissipationModel()
    return SimState(np.asarray(psi, dtype=complex), grid,
                    np.asarray(potential, dtype=float), model, float(dt),
                    **kwargs)


def _guard(state: SimState):
    v_eff = state.potential + state.work.w
    phase = np.max(np.abs(v_eff)) * state.dt / state.hbar
    if not np.isfinite(phase):
        raise InstabilityError(
            f"non-finite effective potential at t={state.t:.6g}")
    if phase > PHASE_STEP_LIMIT:
        raise InstabilityError(
            f"phase step max|V+W| dt/hbar = {phase:.4g} exceeds pi/4 at "
            f"t={state.t:.6g}; reduce dt")


def _check_finite(psi: np.ndarray, state: SimState):
    if not np.all(np.isfinite(psi)):
        raise InstabilityError(
            f"non-finite wavefunction after step {state.steps + 1} "
            f"(t={state.t + state.dt:.6g})")


def _memory_update(state: SimState, psi: np.ndarray):
    rho = density(psi)
    v = state.velocity(psi)
    mask = flow_mask(rho, state.density_floor)
    a = state.acceleration(v, mask)
    g = integrand(state.model, v, a) * memory_weight(rho, state.density_floor)
    return (v, mask), update_work(state.work, g, state.dt)


def _advance(state: SimState, psi, flow, work) -> SimState:
    v, mask = flow
    return dataclasses.replace(
        state, psi=psi, work=work, v_prev=v, v_prev2=state.v_prev,
        flow_prev=mask, flow_prev2=state.flow_prev,
        t=(state.steps + 1) * state.dt, steps=state.steps + 1)


def _advance_linear(state: SimState, psi) -> SimState:
    # W stays identically zero; the velocity history is not needed
    return dataclasses.replace(state, psi=psi, t=(state.steps + 1) * state.dt,
                               steps=state.steps + 1)


def kinetic_propagator(grid: Grid, dt: float, hbar: float = 1.0,
                       mass: float = 1.0) -> np.ndarray:
    k = grid.wavenumbers
    return np.exp(-1j * hbar * k * k * dt / (2.0 * mass))


def strang_step(state: SimState) -> SimState:
    _guard(state)
    dt, hbar = state.dt, state.hbar
    half = np.exp(-0.5j * dt / hbar * (state.potential + state.work.w))
    psi = half * state.psi
    psi = np.fft.ifft(kinetic_propagator(state.grid, dt, hbar, state.mass)
                      * np.fft.fft(psi))
    psi = half * psi
    _check_finite(psi, state)

    if state.model.is_linear:
        return _advance_linear(state, psi)
    w_applied = state.work.w
    for _ in range(1 + state.self_consistent):
        flow, work = _memory_update(state, psi)
        psi = psi * np.exp(-0.5j * dt / hbar * (work.w - w_applied))
        w_applied = work.w
    _check_finite(psi, state)
    return _advance(state, psi, flow, work)


def fd_laplacian(grid: Grid) -> sp.csc_matrix:
    """Periodic three-point second difference (tridiagonal plus corners)."""
    n = grid.n_points
    off = np.ones(n - 1)
    lap = sp.diags([off, -2.0 * np.ones(n), off], [-1, 0, 1], format="lil")
    lap[0, n - 1] = 1.0
    lap[n - 1, 0] = 1.0
    return (lap / grid.dx ** 2).tocsc()


def solve_periodic_tridiagonal(diag: np.ndarray, off: complex,
                               rhs: np.ndarray) -> np.ndarray:
    """Solve a periodic tridiagonal system with constant off-diagonal ``off``.

    The corner entries equal ``off``.  Sherman-Morrison reduces the cyclic
    system to two banded solves.
    """
    n = diag.size
    gamma = -diag[0]
    b = np.asarray(diag, dtype=complex).copy()
    b[0] -= gamma
    b[-1] -= off * off / gamma
    bands = np.empty((3, n), dtype=complex)
    bands[0, 1:] = off
    bands[1] = b
    bands[2, :-1] = off
    u = np.zeros(n, dtype=complex)
    u[0], u[-1] = gamma, off
    yz = solve_banded((1, 1), bands, np.column_stack([rhs, u]),
                      check_finite=False)
    y, z = yz[:, 0], yz[:, 1]
    vy = y[0] + off / gamma * y[-1]
    vz = z[0] + off / gamma * z[-1]
    return y - (vy / (1.0 + vz)) * z


def cn_step(state: SimState) -> SimState:
    _guard(state)
    dt, hbar, grid = state.dt, state.hbar, state.grid
    coef = 0.5j * dt / hbar
    kin = hbar ** 2 / (2.0 * state.mass * grid.dx ** 2)
    # H psi = -kin (psi[j-1] - 2 psi[j] + psi[j+1]) + (V + W) psi[j], periodic
    off = -coef * kin
    psi0 = state.psi
    neighbours = np.roll(psi0, 1) + np.roll(psi0, -1)

    # first pass: memory field extrapolated to mid-step from the last rate
    w_mid = state.work.w + 0.5 * dt * state.work.g_prev
    for _ in range(1 + state.self_consistent):
        on_site = 2.0 * kin + state.potential + w_mid
        rhs = (1.0 - coef * on_site) * psi0 - off * neighbours
        try:
            psi = solve_periodic_tridiagonal(1.0 + coef * on_site, off, rhs)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise InstabilityError(f"Crank-Nicolson solve failed: {exc}") from exc
        _check_finite(psi, state)
        if state.model.is_linear:
            return _advance_linear(state, psi)
        flow, work = _memory_update(state, psi)
        w_mid = 0.5 * (state.work.w + work.w)
    return _advance(state, psi, flow, work)


SCHEMES: dict[str, Callable[[SimState], SimState]] = {
    "strang": strang_step,
    "cn": cn_step,
}


def evolve(state: SimState, n_steps: int,
           observer: Callable | None = None, report_stride: int = 1,
           scheme: str = "strang") -> SimState:
    """Advance ``n_steps`` steps.

    ``observer`` receives an :class:`~radwave.diagnostics.EnergyReport` for
    the initial state and after every ``report_stride`` steps.  Exceptions
    raised by the observer abort the run.
    """
    from .diagnostics import energy_report

    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if report_stride < 1:
        raise ValueError(f"report_stride must be >= 1, got {report_stride}")
    try:
        step = SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; "
                         f"choose from {sorted(SCHEMES)}") from None

    if observer is not None:
        observer(energy_report(state))
    for i in range(1, n_steps + 1):
        state = step(state)
        if observer is not None and i % report_stride == 0:
            observer(energy_report(state))
    return state
