import math

import numpy as np
import pytest

from radwave import (DissipationModel, ModelKind, ReportRecorder, energy_report,
                     evolve, gaussian_packet, make_grid, make_potential, make_state,
                     strang_step)
from radwave.diagnostics import REPORT_FIELDS, width_squared
from radwave.madelung import density


def test_plane_wave_report(grid256):
    k = grid256.wavenumbers[4]
    s = make_state(2.0 * np.exp(1j * k * grid256.x), grid256)
    r = energy_report(s)
    assert r.norm == pytest.approx(4 * grid256.length)
    assert r.kinetic == pytest.approx(k * k / 2 * r.norm, rel=1e-13)
    assert r.potential == 0 and r.work == 0
    assert r.mean_p == pytest.approx(k, rel=1e-13)
    assert r.total == r.kinetic + r.potential + r.work


def test_units_enter_kinetic_and_momentum(grid256):
    k = grid256.wavenumbers[2]
    s = make_state(np.exp(1j * k * grid256.x), grid256, hbar=2.0, mass=3.0)
    r = energy_report(s)
    assert r.kinetic == pytest.approx(4 * k * k / 6 * r.norm, rel=1e-13)
    assert r.mean_p == pytest.approx(2 * k, rel=1e-13)


def test_ground_state_total_flat_over_period():
    g = make_grid(512, -20, 20)
    s = make_state(gaussian_packet(g, 0.0, math.sqrt(0.5)), g,
                   make_potential(g, "harmonic"), dt=1e-3)
    rec = ReportRecorder()
    evolve(s, 6283, rec, 100)
    total = rec.series("total")
    assert total[0] == pytest.approx(0.5, rel=1e-9)
    assert np.max(np.abs(total / total[0] - 1)) <= 1e-8


def test_real_symmetric_has_zero_momentum(grid256):
    psi = np.exp(-grid256.x ** 2) + 0.3 * np.exp(-(grid256.x - 2) ** 2) \
        + 0.3 * np.exp(-(grid256.x + 2) ** 2)
    r = energy_report(make_state(psi.astype(complex), grid256))
    assert abs(r.mean_p) < 1e-14
    assert abs(r.mean_x) < 1e-13


def test_report_row_order(grid256):
    r = energy_report(make_state(gaussian_packet(grid256, 1.0, 1.0, 0.5), grid256))
    assert r.as_row() == tuple(r.as_dict()[f] for f in REPORT_FIELDS)
    assert r.norm > 0 and r.kinetic >= 0


def test_width_squared(grid256):
    assert width_squared(grid256, gaussian_packet(grid256, 1.0, 0.8)) == \
        pytest.approx(0.64, rel=1e-10)


@pytest.mark.parametrize("kind", [ModelKind.RADIATIVE, ModelKind.LINEAR_DRAG])
def test_dissipated_power_nonnegative(kind):
    g = make_grid(512, -20, 20)
    s = make_state(gaussian_packet(g, 5.0, 0.5), g, make_potential(g, "harmonic"),
                   DissipationModel(kind, 0.1), dt=1e-3)
    rec = ReportRecorder()
    evolve(s, 1000, rec, 10)
    assert np.all(rec.series("dissipated_power") >= 0)
    assert rec.series("dissipated_power")[-1] > 0


def test_work_rate_decomposition():
    # d<W>/dt = <g> + int W d(rho)/dt : a source term and a transport term
    g = make_grid(512, -20, 20)
    dt = 1e-3
    s = make_state(gaussian_packet(g, 5.0, 0.5), g, make_potential(g, "harmonic"),
                   DissipationModel(ModelKind.LINEAR_DRAG, 0.1), dt=dt)
    s = evolve(s, 1999)
    states = [s, strang_step(s)]
    states.append(strang_step(states[1]))
    prev, mid, nxt = states
    d_work = (energy_report(nxt).work - energy_report(prev).work) / (2 * dt)
    source = energy_report(mid).dissipated_power
    transport = g.integrate(mid.work.w * (density(nxt.psi) - density(prev.psi)) / (2 * dt))
    assert abs(transport) > 0.1 * abs(source)
    assert abs(d_work - (source + transport)) <= 1e-4 * (abs(source) + abs(transport))


def test_ehrenfest_coherent_state():
    g = make_grid(512, -20, 20)
    dt = 1e-3
    s = make_state(gaussian_packet(g, 5.0, math.sqrt(0.5)), g,
                   make_potential(g, "harmonic"), dt=dt)
    rec = ReportRecorder()
    evolve(s, 3000, rec, 1)
    x, p = rec.series("mean_x"), rec.series("mean_p")
    dxdt = (x[2:] - x[:-2]) / (2 * dt)
    assert np.max(np.abs(dxdt - p[1:-1])) <= dt
