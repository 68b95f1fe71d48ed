"""Initial packets, potentials and the named scenarios used by runs and tests."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, make_grid

MARGIN_SIGMAS = 5.0


class PotentialKind(enum.Enum):
    FREE = "free"
    HARMONIC = "harmonic"
    LINEAR = "linear"


def gaussian_packet(grid: Grid, x0: float, sigma: float, p0: float = 0.0,
                    hbar: float = 1.0) -> np.ndarray:
    """Gaussian ``exp(-(x-x0)^2 / 4 sigma^2 + i p0 x / hbar)`` with unit grid norm."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    margin = MARGIN_SIGMAS * sigma
    if x0 - grid.x_min < margin or grid.x_max - x0 < margin:
        raise ValueError(
            f"packet at x0={x0} with sigma={sigma} is closer than "
            f"{MARGIN_SIGMAS:g} sigma to the domain edge [{grid.x_min}, {grid.x_max}]")
    x = grid.x
    psi = (2.0 * np.pi * sigma ** 2) ** -0.25 * np.exp(
        -((x - x0) ** 2) / (4.0 * sigma ** 2) + 1j * p0 * x / hbar)
    return psi / np.sqrt(grid.integrate(np.abs(psi) ** 2))


def make_potential(grid: Grid, kind, omega: float = 1.0, mass: float = 1.0,
                   slope: float = 0.0, center: float | None = None) -> np.ndarray:
    kind = PotentialKind(kind)
    if kind is PotentialKind.FREE:
        return np.zeros(grid.n_points)
    xc = 0.5 * (grid.x_min + grid.x_max) if center is None else center
    if kind is PotentialKind.HARMONIC:
        if not omega > 0:
            raise ValueError(f"omega must be positive, got {omega}")
        if not mass > 0:
            raise ValueError(f"mass must be positive, got {mass}")
        return 0.5 * mass * omega ** 2 * (grid.x - xc) ** 2
    if not np.isfinite(slope):
        raise ValueError(f"slope must be finite, got {slope}")
    return slope * (grid.x - xc)


@dataclass(frozen=True)
class Scenario:
    name: str
    potential_kind: PotentialKind
    x0: float = 0.0
    sigma: float = 1.0
    p0: float = 0.0
    omega: float = 1.0
    slope: float = 0.0
    n_points: int = 512
    x_min: float = -20.0
    x_max: float = 20.0
    dt: float = 1e-3
    n_steps: int = 1000
    description: str = field(default="", compare=False)

    def grid(self) -> Grid:
        return make_grid(self.n_points, self.x_min, self.x_max)

    def validate(self, grid: Grid | None = None, hbar: float = 1.0):
        """Builds the initial packet once; raises if margin or norm fail."""
        grid = grid or self.grid()
        psi = gaussian_packet(grid, self.x0, self.sigma, self.p0, hbar)
        norm = grid.integrate(np.abs(psi) ** 2)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"scenario {self.name}: initial norm {norm}")
        return psi

    def initial_state(self, grid: Grid, hbar: float = 1.0) -> np.ndarray:
        return self.validate(grid, hbar)

    def potential(self, grid: Grid, mass: float = 1.0) -> np.ndarray:
        return make_potential(grid, self.potential_kind, omega=self.omega,
                              mass=mass, slope=self.slope)


SCENARIOS: dict[str, Scenario] = {s.name: s for s in (
    Scenario("free_gaussian", PotentialKind.FREE, n_steps=4000,
             description="Gaussian at rest spreading in free space"),
    Scenario("boosted_gaussian", PotentialKind.FREE, x0=-5.0, p0=2.0,
             n_steps=4000, description="Gaussian moving at p0 in free space"),
    Scenario("coherent_state", PotentialKind.HARMONIC, x0=5.0,
             sigma=np.sqrt(0.5), n_steps=6283,
             description="displaced harmonic-oscillator ground state"),
    Scenario("damped_harmonic", PotentialKind.HARMONIC, x0=5.0, sigma=0.5,
             n_steps=18850,
             description="narrow displaced packet in a harmonic well, "
                         "three periods"),
    Scenario("ramp", PotentialKind.LINEAR, x0=0.0, slope=0.5, n_steps=4000,
             description="Gaussian accelerating down a linear ramp"),
)}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; "
                         f"choose from {sorted(SCENARIOS)}") from None
