r"""Nonlinear memory terms as real integrands of the flow fields.

Every model evolves

    i hbar psi_t = -(hbar^2 / 2m) psi_xx + V psi + W(x, t) psi,
    W(x, t) = \int_0^t g(v(x, t'), a(x, t')) dt',

with ``v`` the Madelung velocity and ``a = dv/dt`` at fixed ``x``.  The
equations are usually written in terms of ``L = d/dx ln(psi / conj(psi))``.
For ``psi = sqrt(rho) exp(i S / hbar)`` we have ``ln(psi / conj(psi)) =
2 i S / hbar`` and ``v = S_x / m``, hence

    L = 2 i m v / hbar,            dL/dt = 2 i m a / hbar.

Substituting these into each nonlinear prefactor gives a real integrand:

    RADIATIVE       -kappa hbar^2/(4 m^2) (dL/dt)^2
                        = -kappa hbar^2/(4 m^2) * (-4 m^2 a^2 / hbar^2)
                        = kappa a^2
    LINEAR_DRAG     -k hbar^2/(4 m^2) L^2 = k v^2
    QUADRATIC_DRAG  +i k hbar^3/(8 m^3) L^3
                        = i k hbar^3/(8 m^3) * (-8 i m^3 v^3 / hbar^3)
                        = k v^3
    ACCEL_DRAG      -k hbar^2/(4 m^2) L dL/dt = k v a

The leading minus signs in the radiative and drag forms are therefore
exactly what turns ``(2 i)^2 = -4`` back into the positive classical work
``kappa |dv/dt|^2`` of the Larmor formula.  Because ``g`` is real, ``W`` is
a real potential and the evolution stays norm-preserving.

``v^3`` is taken literally by default.  For ``v < 0`` it is negative,
whereas the work done against ``F = -k v^2 v/|v|`` is ``k |v|^3``; the
``SPEED_WEIGHTED`` convention gives ``k |v| v^2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ModelKind(enum.Enum):
    NONE = "none"
    RADIATIVE = "radiative"
    LINEAR_DRAG = "linear_drag"
    QUADRATIC_DRAG = "quadratic_drag"
    ACCEL_DRAG = "accel_drag"


class CubeConvention(enum.Enum):
    LITERAL = "literal"
    SPEED_WEIGHTED = "speed_weighted"


@dataclass(frozen=True)
class DissipationModel:
    kind: ModelKind = ModelKind.NONE
    kappa: float = 0.0
    cube_convention: CubeConvention = CubeConvention.LITERAL

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(self, "cube_convention",
                           CubeConvention(self.cube_convention))
        kappa = float(self.kappa)
        if not (kappa >= 0.0 and math.isfinite(kappa)):
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")
        object.__setattr__(self, "kappa", kappa)

    @property
    def is_linear(self) -> bool:
        """True when the memory term vanishes identically."""
        return self.kind is ModelKind.NONE or self.kappa == 0.0

    @property
    def uses_acceleration(self) -> bool:
        return self.kind in (ModelKind.RADIATIVE, ModelKind.ACCEL_DRAG)


def integrand(model: DissipationModel, v: np.ndarray,
              a: np.ndarray | None = None) -> np.ndarray:
    """Pointwise work rate ``g(v, a)`` of ``model``."""
    v = np.asarray(v, dtype=float)
    if a is None:
        if model.uses_acceleration:
            raise ValueError(f"{model.kind.name} needs an acceleration field")
        a = np.zeros_like(v)
    a = np.asarray(a, dtype=float)
    if v.shape != a.shape:
        raise ValueError(f"v {v.shape} and a {a.shape} differ in shape")
    if model.is_linear:
        return np.zeros_like(v)

    kappa, kind = model.kappa, model.kind
    if kind is ModelKind.RADIATIVE:
        return kappa * a * a
    if kind is ModelKind.LINEAR_DRAG:
        return kappa * v * v
    if kind is ModelKind.QUADRATIC_DRAG:
        if model.cube_convention is CubeConvention.SPEED_WEIGHTED:
            return kappa * np.abs(v) * v * v
        return kappa * v * v * v
    if kind is ModelKind.ACCEL_DRAG:
        return kappa * v * a
    raise AssertionError(kind)


def larmor_kappa(charge: float, vacuum_permittivity: float,
                 light_speed: float) -> float:
    """Larmor coefficient ``2 q^2 / (3 * 4 pi eps0 * c^3)``."""
    for name, val in (("charge", charge),
                      ("vacuum_permittivity", vacuum_permittivity),
                      ("light_speed", light_speed)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val}")
    return 2.0 * charge ** 2 / (3.0 * 4.0 * math.pi * vacuum_permittivity
                                * light_speed ** 3)
