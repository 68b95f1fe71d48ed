"""Running memory integral ``W(x, t) = int_0^t g dt'`` kept per grid point."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class WorkField:
    w: np.ndarray
    g_prev: np.ndarray
    t_elapsed: float = 0.0

    @classmethod
    def zeros(cls, n_points: int) -> "WorkField":
        return cls(np.zeros(n_points), np.zeros(n_points), 0.0)

    @classmethod
    def starting(cls, g0: np.ndarray) -> "WorkField":
        """Empty integral whose first trapezoid uses the integrand ``g0`` at t = 0."""
        g0 = np.array(g0, dtype=float)
        return cls(np.zeros(g0.shape), g0, 0.0)


def update_work(field: WorkField, g_now: np.ndarray, dt: float) -> WorkField:
    """Trapezoid step ``w += dt (g_prev + g_now) / 2``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    g_now = np.asarray(g_now, dtype=float)
    if g_now.shape != field.w.shape:
        raise ValueError(
            f"integrand has shape {g_now.shape}, expected {field.w.shape}")
    w = field.w + 0.5 * dt * (field.g_prev + g_now)
    return WorkField(w, g_now.copy(), field.t_elapsed + dt)


def accel_drag_closed_form(v_now: np.ndarray, v_init: np.ndarray,
                           kappa: float) -> np.ndarray:
    """Exact ``kappa int v dv/dt dt' = kappa (v^2 - v0^2) / 2`` at fixed x.

    Only used to check the accumulated ACCEL_DRAG work.
    """
    v_now = np.asarray(v_now, dtype=float)
    v_init = np.asarray(v_init, dtype=float)
    if v_now.shape != v_init.shape:
        raise ValueError("velocity arrays differ in shape")
    return 0.5 * kappa * (v_now * v_now - v_init * v_init)
