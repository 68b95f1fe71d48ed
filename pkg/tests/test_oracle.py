import math

import numpy as np
import pytest

from radwave import (CubeConvention, DissipationModel, ModelKind, OracleConfig,
                     gaussian_packet, make_grid, make_potential, make_state,
                     rk4_reference, rk4_run, strang_step)
from radwave.madelung import density
from radwave.memory import accel_drag_closed_form
from radwave.validation import observed_orders, oracle_errors

from conftest import l2


def test_plane_wave_fd_dispersion():
    g = make_grid(32, 0.0, 2 * np.pi)
    k = g.wavenumbers[3]
    # at the stability limit RK4's own amplitude error reaches 2e-8 by t = 0.5;
    # half the limit brings it to 1.5e-9
    dt = 0.1 * g.dx ** 2
    n = int(round(0.5 / dt))
    out = rk4_reference(OracleConfig(g, np.exp(1j * k * g.x), dt), n)
    e_k = (1 - math.cos(k * g.dx)) / g.dx ** 2
    exact = np.exp(1j * (k * g.x - e_k * n * dt))
    assert np.max(np.abs(out - exact)) <= 1e-8


def test_zero_steps_returns_initial():
    g = make_grid(32, -8, 8)
    psi = gaussian_packet(g, 0.0, 1.0, 1.0)
    out = rk4_reference(OracleConfig(g, psi, 1e-2, model=DissipationModel(
        ModelKind.RADIATIVE, 0.1)), 0)
    np.testing.assert_array_equal(out, psi)


def test_stability_guard():
    g = make_grid(32, -8, 8)
    psi = gaussian_packet(g, 0.0, 1.0)
    limit = 0.2 * g.dx ** 2
    OracleConfig(g, psi, limit)
    with pytest.raises(ValueError, match="stability"):
        OracleConfig(g, psi, 1.01 * limit)
    with pytest.raises(ValueError):
        OracleConfig(g, psi, 0.0)


def test_grid_size_limit():
    g = make_grid(256, -8, 8)
    with pytest.raises(ValueError, match="128"):
        OracleConfig(g, gaussian_packet(g, 0.0, 1.0), 1e-5)


def test_negative_steps():
    g = make_grid(32, -8, 8)
    with pytest.raises(ValueError):
        rk4_reference(OracleConfig(g, gaussian_packet(g, 0.0, 1.0), 1e-2), -1)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nan_detected():
    g = make_grid(32, -8, 8)
    psi = gaussian_packet(g, 0.0, 1.0)
    psi[0] = np.inf
    with pytest.raises(FloatingPointError):
        rk4_reference(OracleConfig(g, psi, 1e-2), 3)


@pytest.mark.parametrize("kind", [ModelKind.NONE, ModelKind.LINEAR_DRAG,
                                  ModelKind.RADIATIVE, ModelKind.ACCEL_DRAG])
def test_norm_drift(kind):
    g = make_grid(64, -8, 8)
    psi = gaussian_packet(g, 0.0, 0.8, g.wavenumbers[2])
    V = make_potential(g, "harmonic", omega=0.5)
    out = rk4_reference(OracleConfig(g, psi, 6e-3, V, DissipationModel(kind, 0.1)), 300)
    assert abs(g.integrate(density(out)) - 1) <= 1e-6


def test_linear_drag_strang_agreement_order():
    errors = oracle_errors(DissipationModel(ModelKind.LINEAR_DRAG, 0.1))
    assert errors[1] < 0.05
    assert observed_orders(errors).min() >= 1.9


def _closed_form_error(run_oracle, dt, kappa=0.1):
    g = make_grid(128, -8, 8)
    V = make_potential(g, "harmonic")
    psi = gaussian_packet(g, 1.5, 0.6)
    model = DissipationModel(ModelKind.ACCEL_DRAG, kappa)
    n = int(round(1.0 / dt))
    if run_oracle:
        r = rk4_run(OracleConfig(g, psi, dt, V, model), n, flow_margin=1e3)
        exact = accel_drag_closed_form(r.v_final, r.v_init, kappa)
        return np.max(np.abs(r.work.w - exact)[r.flow_always])
    s = make_state(psi, g, V, model, dt=dt)
    v0 = s.v_prev.copy()
    keep = np.ones(g.n_points, dtype=bool)
    for _ in range(n):
        s = strang_step(s)
        rho = density(s.psi)
        keep &= rho >= 1e3 * s.density_floor * rho.max()
    return np.max(np.abs(s.work.w - accel_drag_closed_form(s.v_prev, v0, kappa))[keep])


@pytest.mark.parametrize("run_oracle", [True, False], ids=["rk4", "strang"])
def test_accel_drag_closed_form(run_oracle):
    errors = [_closed_form_error(run_oracle, dt) for dt in (2e-3, 1e-3, 5e-4)]
    assert errors[-1] < 1e-6
    assert observed_orders(errors).min() >= 1.9


def test_oracle_and_strang_work_fields_agree():
    g = make_grid(128, -8, 8)
    V = make_potential(g, "harmonic")
    psi = gaussian_packet(g, 1.5, 0.6)
    model = DissipationModel(ModelKind.ACCEL_DRAG, 0.1)
    dt, n = 1e-3, 1000
    r = rk4_run(OracleConfig(g, psi, dt, V, model), n, flow_margin=1e3)
    s = make_state(psi, g, V, model, dt=dt)
    for _ in range(n):
        s = strang_step(s)
    scale = np.max(np.abs(r.work.w[r.flow_always]))
    diff = np.max(np.abs(s.work.w - r.work.w)[r.flow_always])
    # the two differ by the finite-difference dispersion of the oracle
    assert diff <= 0.05 * scale
    assert l2(g, s.psi, r.psi) < 0.05
