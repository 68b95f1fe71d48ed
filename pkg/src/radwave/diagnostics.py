"""Expectation-value bookkeeping: norm, energies, memory work, <x>, <p>."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .grid import spectral_derivative
from .madelung import density

REPORT_FIELDS = ("t", "norm", "kinetic", "potential", "work", "total",
                 "mean_x", "mean_p", "dissipated_power")


@dataclass(frozen=True)
class EnergyReport:
    """One diagnostic row.

    ``kinetic``, ``potential``, ``work`` and ``dissipated_power`` are plain
    integrals against the (unnormalised) density; ``mean_x`` and ``mean_p``
    are divided by the norm.
    """

    t: float
    norm: float
    kinetic: float
    potential: float
    work: float
    total: float
    mean_x: float
    mean_p: float
    dissipated_power: float

    def as_dict(self) -> dict:
        return asdict(self)

    def as_row(self) -> tuple:
        return tuple(getattr(self, f) for f in REPORT_FIELDS)


def energy_report(state) -> EnergyReport:
    grid, psi = state.grid, state.psi
    hbar, mass = state.hbar, state.mass
    rho = density(psi)
    dpsi = spectral_derivative(grid, psi)

    norm = grid.integrate(rho)
    kinetic = hbar ** 2 / (2.0 * mass) * grid.integrate(np.abs(dpsi) ** 2)
    potential = grid.integrate(state.potential * rho)
    work = grid.integrate(state.work.w * rho)
    power = grid.integrate(state.work.g_prev * rho)
    mean_x = grid.integrate(grid.x * rho) / norm
    mean_p = hbar * grid.integrate(np.imag(np.conj(psi) * dpsi)) / norm
    return EnergyReport(t=float(state.t), norm=norm, kinetic=kinetic,
                        potential=potential, work=work,
                        total=kinetic + potential + work, mean_x=mean_x,
                        mean_p=mean_p, dissipated_power=power)


def width_squared(grid, psi) -> float:
    """Position variance ``<x^2> - <x>^2`` of a packet."""
    rho = density(psi)
    norm = grid.integrate(rho)
    mx = grid.integrate(grid.x * rho) / norm
    return grid.integrate((grid.x - mx) ** 2 * rho) / norm


class ReportRecorder:
    """Observer that keeps every report it is handed."""

    def __init__(self):
        self.reports: list[EnergyReport] = []

    def __call__(self, report: EnergyReport):
        self.reports.append(report)

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.reports])
