import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radwave import (SCENARIOS, DissipationModel, ModelKind, PotentialKind,
                     ReportRecorder, energy_report, evolve, gaussian_packet,
                     get_scenario, make_grid, make_potential, make_state,
                     velocity_field)
from radwave.validation import damped_oscillator_extrema


@pytest.fixture
def grid():
    return make_grid(512, -20, 20)


def test_free_potential(grid):
    assert np.all(make_potential(grid, PotentialKind.FREE) == 0)


def test_harmonic_potential_values():
    g = make_grid(16, -8, 8)
    V = make_potential(g, "harmonic", omega=1.0, mass=1.0)
    i0 = int(np.argmin(np.abs(g.x)))
    assert g.x[i0] == 0 and V[i0] == 0
    assert V[i0 + 1] == pytest.approx(0.5)


def test_harmonic_centered_on_domain():
    g = make_grid(32, 0, 8)
    V = make_potential(g, "harmonic", omega=2.0, mass=0.5)
    np.testing.assert_allclose(V, 0.25 * 4 * (g.x - 4) ** 2)


@pytest.mark.parametrize("slope", [0.5, -1.25, 3.0])
def test_linear_potential_step(grid, slope):
    V = make_potential(grid, "linear", slope=slope)
    np.testing.assert_allclose(np.diff(V), slope * grid.dx, rtol=1e-12)


@pytest.mark.parametrize("kw", [dict(omega=0.0), dict(omega=-1.0), dict(mass=0.0)])
def test_harmonic_rejects_bad_params(grid, kw):
    with pytest.raises(ValueError):
        make_potential(grid, "harmonic", **kw)


def test_unknown_potential(grid):
    with pytest.raises(ValueError):
        make_potential(grid, "double_well")


def test_packet_at_rest_has_no_velocity(grid):
    v = velocity_field(gaussian_packet(grid, 2.0, 1.0), grid)
    assert np.max(np.abs(v)) == 0.0


@given(st.floats(0.3, 2.0), st.floats(-1, 1), st.floats(-3, 3))
def test_packet_norm_and_moments(sigma, frac, p0):
    # centres kept 8 sigma inside the edges; see the margin test below
    g = make_grid(1024, -20, 20)
    x0 = frac * (20 - 8 * sigma)
    psi = gaussian_packet(g, x0, sigma, p0)
    r = energy_report(make_state(psi, g))
    assert abs(r.norm - 1) <= 1e-10
    assert abs(r.mean_x - x0) <= 1e-8
    assert abs(r.mean_p - p0) <= 1e-8


def test_moment_bias_at_the_margin():
    # at the 5 sigma margin the tail cut by the periodic edge shifts <x>
    # by ~sigma exp(-12.5) / sqrt(2 pi); it is gone by 8 sigma
    g = make_grid(1024, -20, 20)
    shifts = []
    for m in (5, 8):
        r = energy_report(make_state(gaussian_packet(g, 20 - m, 1.0), g))
        shifts.append(abs(r.mean_x - (20 - m)))
    assert 1e-7 < shifts[0] < 1e-5
    assert shifts[1] < 1e-12


@pytest.mark.parametrize("x0,sigma", [(17.0, 1.0), (-16.0, 1.0), (0.0, 4.1)])
def test_margin_violation(grid, x0, sigma):
    with pytest.raises(ValueError, match="sigma"):
        gaussian_packet(grid, x0, sigma)


def test_sigma_must_be_positive(grid):
    with pytest.raises(ValueError):
        gaussian_packet(grid, 0.0, 0.0)


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_every_scenario_validates(name):
    sc = get_scenario(name)
    psi = sc.validate()
    assert abs(sc.grid().integrate(np.abs(psi) ** 2) - 1) <= 1e-10
    assert sc.potential(sc.grid()).shape == (sc.n_points,)


def test_unknown_scenario():
    with pytest.raises(ValueError, match="unknown scenario"):
        get_scenario("double_well")


def test_classical_reference_envelope():
    amps = damped_oscillator_extrema(6 * math.pi, kappa=0.1)
    ratios = amps[1:] / amps[:-1]
    np.testing.assert_allclose(ratios, math.exp(-0.1 * math.pi / 2), rtol=1e-3)


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="the accumulated work field trails the "
                   "packet and its gradient pushes it forward; |<x>| grows "
                   "from 5.0 to 5.24 at the first turning point")
def test_damped_harmonic_extrema_decay():
    sc = get_scenario("damped_harmonic")
    g = sc.grid()
    s = make_state(sc.validate(g), g, sc.potential(g),
                   DissipationModel(ModelKind.LINEAR_DRAG, 0.1), dt=sc.dt)
    rec = ReportRecorder()
    # the run hits the phase-step guard near t = 5.8; stop before it
    evolve(s, 5500, rec, 10)
    x = np.abs(rec.series("mean_x"))
    peaks = [x[0]] + [x[i] for i in range(1, len(x) - 1) if x[i - 1] < x[i] >= x[i + 1]]
    assert len(peaks) >= 2
    assert np.all(np.diff(peaks) < 0)
