"""Built-in validation suites.

Each suite returns a list of :class:`Check` rows: a measured value, the
bound it is held to and whether it passed.  The CLI prints them as a table;
the acceptance tests assert on them.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.signal import argrelextrema

from .diagnostics import ReportRecorder, width_squared
from .dissipation import CubeConvention, DissipationModel, ModelKind, larmor_kappa
from .grid import make_grid
from .madelung import density, velocity_field
from .memory import accel_drag_closed_form
from .oracle import OracleConfig, rk4_reference
from .scenarios import gaussian_packet, make_potential
from .stepper import InstabilityError, evolve, make_state, strang_step

# CODATA 2018 exact / recommended SI values
ELEMENTARY_CHARGE = 1.602176634e-19
VACUUM_PERMITTIVITY = 8.8541878128e-12
LIGHT_SPEED = 2.99792458e8

DISSIPATIVE_MODELS = (
    DissipationModel(ModelKind.RADIATIVE),
    DissipationModel(ModelKind.LINEAR_DRAG),
    DissipationModel(ModelKind.QUADRATIC_DRAG),
    DissipationModel(ModelKind.QUADRATIC_DRAG,
                     cube_convention=CubeConvention.SPEED_WEIGHTED),
    DissipationModel(ModelKind.ACCEL_DRAG),
)


def model_label(model: DissipationModel) -> str:
    label = model.kind.value
    if model.kind is ModelKind.QUADRATIC_DRAG:
        label += f"[{model.cube_convention.value}]"
    return label


def with_kappa(model: DissipationModel, kappa: float) -> DissipationModel:
    return DissipationModel(model.kind, kappa, model.cube_convention)


@dataclass
class Check:
    criterion: str
    name: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<="
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"{status}  [{self.criterion}] {self.name}: "
                f"{self.value:.4g} {self.relation} {self.tolerance:.4g}")
        if self.detail:
            text += f"  ({self.detail})"
        return text


def _le(criterion, name, value, tol, detail=""):
    return Check(criterion, name, float(value), tol,
                 bool(np.isfinite(value) and value <= tol), "<=", detail)


def _ge(criterion, name, value, tol, detail=""):
    return Check(criterion, name, float(value), tol,
                 bool(np.isfinite(value) and value >= tol), ">=", detail)


def observed_orders(errors) -> np.ndarray:
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])


def _l2(grid, a, b) -> float:
    return math.sqrt(grid.integrate(np.abs(a - b) ** 2))


# ---------------------------------------------------------------- linear limit

def free_width_error(n_points=512, length=20.0, sigma=1.0, dt=1e-3,
                     samples=40):
    """Max relative error of the free-spreading law up to t = 4 m sigma^2 / hbar."""
    grid = make_grid(n_points, -length, length)
    state = make_state(gaussian_packet(grid, 0.0, sigma), grid, dt=dt)
    t_end = 4.0 * sigma ** 2
    n_total = int(round(t_end / dt))
    stride = n_total // samples
    worst = abs(width_squared(grid, state.psi) / sigma ** 2 - 1.0)
    for _ in range(samples):
        state = evolve(state, stride)
        exact = sigma ** 2 * (1.0 + (state.t / (2.0 * sigma ** 2)) ** 2)
        worst = max(worst, abs(width_squared(grid, state.psi) / exact - 1.0))
    return worst


def coherent_state_error(steps_per_period=4096, x0=5.0, omega=1.0,
                         n_points=512, length=20.0):
    """Max |<x>(t) - x0 cos(omega t)| / x0 over one period."""
    grid = make_grid(n_points, -length, length)
    sigma = math.sqrt(0.5 / omega)
    period = 2.0 * math.pi / omega
    state = make_state(gaussian_packet(grid, x0, sigma), grid,
                       make_potential(grid, "harmonic", omega=omega),
                       dt=period / steps_per_period)
    rec = ReportRecorder()
    evolve(state, steps_per_period, rec, 1)
    t, mx = rec.series("t"), rec.series("mean_x")
    return float(np.max(np.abs(mx - x0 * np.cos(omega * t))) / x0)


def kappa_zero_outputs(n_steps=2000) -> dict[str, bytes]:
    """Report CSV bytes of the damped-harmonic run at kappa = 0 per model."""
    from .cli import RunConfig, write_report_csv

    out = {}
    for model in (DissipationModel(),) + DISSIPATIVE_MODELS:
        cfg = RunConfig(scenario="damped_harmonic", model=model.kind.value,
                        kappa=0.0, cube_convention=model.cube_convention.value,
                        n_steps=n_steps, report_stride=10)
        buf = io.StringIO()
        state = cfg.initial_state()
        write_report_csv(buf, state, cfg)
        out[model_label(model)] = buf.getvalue().encode()
    return out


def linear_limit_suite() -> list[Check]:
    checks = []
    outputs = kappa_zero_outputs()
    ref = outputs.pop("none")
    mismatched = [k for k, v in outputs.items() if v != ref]
    checks.append(Check("1", "kappa=0 models differing from NONE (byte compare)",
                        len(mismatched), 0, not mismatched, "==",
                        ", ".join(mismatched)))
    checks.append(_le("1", "free width law max rel. error, t in [0, 4]",
                      free_width_error(), 1e-6))
    checks.append(_le("1", "coherent <x> max rel. error, one period, dt=T/4096",
                      coherent_state_error(), 1e-6))
    return checks


# ---------------------------------------------------------------- convergence

DAMPED = dict(n_points=512, length=20.0, x0=5.0, sigma=0.5, omega=1.0)


def _damped_state(model, dt, **over):
    p = dict(DAMPED, **over)
    grid = make_grid(p["n_points"], -p["length"], p["length"])
    return make_state(gaussian_packet(grid, p["x0"], p["sigma"]), grid,
                      make_potential(grid, "harmonic", omega=p["omega"]),
                      model, dt=dt)


def strang_order(base_divisions=256, x0=5.0, omega=1.0, length=12.0):
    """Error ratio e(dt)/e(dt/2) against a dt/4 reference, coherent state, t=T/4.

    The domain is narrower than the default so the coarsest step passes
    the phase-step guard.
    """
    grid = make_grid(512, -length, length)
    psi0 = gaussian_packet(grid, x0, math.sqrt(0.5 / omega))
    V = make_potential(grid, "harmonic", omega=omega)
    t_end = 0.5 * math.pi / omega
    finals = []
    for level in range(3):
        n = base_divisions * 2 ** level
        state = make_state(psi0, grid, V, dt=t_end / n)
        finals.append(evolve(state, n).psi)
    e1 = _l2(grid, finals[0], finals[2])
    e2 = _l2(grid, finals[1], finals[2])
    return e1 / e2


def norm_drift(model, dt=1e-3, n_steps=1000) -> float:
    state = _damped_state(model, dt)
    n0 = state.norm
    state = evolve(state, n_steps)
    return abs(state.norm / n0 - 1.0)


def energy_drift(model, dt, periods=3.0, stride=10):
    """Max relative change of <T>+<V>+<W> over ``periods`` oscillator periods.

    Returns ``(drift, t_reached, error_message)``; a numerical instability
    ends the run early and is reported rather than raised.
    """
    state = _damped_state(model, dt)
    n_steps = int(round(periods * 2.0 * math.pi / DAMPED["omega"] / dt))
    rec = ReportRecorder()
    err = ""
    try:
        evolve(state, n_steps, rec, stride)
    except InstabilityError as exc:
        err = str(exc)
    total = rec.series("total")
    drift = float(np.max(np.abs(total / total[0] - 1.0)))
    return drift, rec.reports[-1].t, err


def convergence_suite(energy_models=DISSIPATIVE_MODELS) -> list[Check]:
    checks = [_ge("-", "Strang error ratio under dt halving (coherent state)",
                  strang_order(), 3.6)]
    for model in DISSIPATIVE_MODELS:
        for kappa in (0.05, 0.2):
            m = with_kappa(model, kappa)
            checks.append(_le("2", f"norm drift / 1000 steps, {model_label(m)} "
                               f"kappa={kappa}", norm_drift(m), 1e-8))

    dt0 = 2.0 * math.pi / 50000
    drift0, _, err = energy_drift(DissipationModel(), dt0, stride=100)
    checks.append(_le("5", "energy drift, kappa=0, 3 periods, dt=T/50000",
                      drift0, 1e-8, err))
    for model in energy_models:
        m = with_kappa(model, 0.1)
        d1, t1, err1 = energy_drift(m, 1e-3)
        d2, t2, err2 = energy_drift(m, 5e-4)
        label = model_label(m)
        note = f"stopped at t={t1:.3g}: {err1}" if err1 else ""
        checks.append(_le("5", f"energy drift, {label} kappa=0.1, 3 periods",
                          d1 if not err1 else math.inf, 1e-3,
                          note or f"measured {d1:.3g}"))
        order = math.log2(d1 / d2) if d1 > 0 and d2 > 0 else math.nan
        checks.append(_ge("5", f"energy drift order under dt halving, {label}",
                          order if not (err1 or err2) else math.nan, 1.0,
                          f"drifts {d1:.3g} -> {d2:.3g}"
                          + (f"; unstable at t={t2:.3g}" if err2 else "")))
    return checks


# ---------------------------------------------------------------- closed form

CLOSED_FORM = dict(n_points=512, length=10.0, x0=3.0, sigma=0.5, omega=1.0,
                   kappa=0.1, t_end=1.0, dts=(4e-3, 2e-3, 1e-3))


def closed_form_errors(n_points=512, length=10.0, x0=3.0, sigma=0.5,
                       omega=1.0, kappa=0.1, t_end=1.0,
                       dts=(4e-3, 2e-3, 1e-3), margin=1e3):
    """Max |W - kappa (v^2 - v0^2) / 2| for ACCEL_DRAG at each dt.

    Compared only where the density stayed above ``margin`` times the
    floor for the whole run; points that entered the flow region later
    start their memory from zero velocity history.
    """
    grid = make_grid(n_points, -length, length)
    psi0 = gaussian_packet(grid, x0, sigma)
    V = make_potential(grid, "harmonic", omega=omega)
    model = DissipationModel(ModelKind.ACCEL_DRAG, kappa)
    errors = []
    for dt in dts:
        state = make_state(psi0, grid, V, model, dt=dt)
        v0 = state.v_prev.copy()
        keep = np.ones(grid.n_points, dtype=bool)
        for _ in range(int(round(t_end / dt))):
            state = strang_step(state)
            rho = density(state.psi)
            keep &= rho >= margin * state.density_floor * rho.max()
        exact = accel_drag_closed_form(state.v_prev, v0, kappa)
        errors.append(float(np.max(np.abs(state.work.w - exact)[keep])))
    return errors


def larmor_error() -> tuple[float, float]:
    """Library coefficient against an independent evaluation of 2e^2/(3 4pi eps0 c^3)."""
    e, eps0, c = ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY, LIGHT_SPEED
    reference = (e * e) / (6.0 * math.pi * eps0) / c / c / c
    value = larmor_kappa(e, eps0, c)
    return value, abs(value / reference - 1.0)


def nodeless_state(grid):
    """Smooth periodic wavefunction with no nodes and a non-trivial phase."""
    k1 = grid.wavenumbers[1]
    amplitude = 1.5 + np.cos(k1 * grid.x) + 0.3 * np.sin(2.0 * k1 * grid.x)
    return amplitude * np.exp(0.8j * np.sin(k1 * grid.x))


def madelung_errors() -> dict[str, float]:
    grid = make_grid(256, -16.0, 16.0)
    k1 = grid.wavenumbers[5]
    plane = np.exp(1j * k1 * grid.x)
    out = {"plane wave": np.max(np.abs(velocity_field(plane, grid) - k1))}

    psi = nodeless_state(grid)
    base = velocity_field(psi, grid)
    out["global phase"] = np.max(np.abs(
        velocity_field(np.exp(0.7j) * psi, grid) - base))
    out["scaling"] = np.max(np.abs(
        velocity_field((2.5 - 1.25j) * psi, grid) - base))

    p0 = 2.0 * grid.wavenumbers[3]
    boosted = velocity_field(psi * np.exp(1j * p0 * grid.x), grid)
    out["boost"] = np.max(np.abs(boosted - base - p0))
    return out


def closed_form_suite() -> list[Check]:
    errors = closed_form_errors()
    orders = observed_orders(errors)
    checks = [_ge("3", "ACCEL_DRAG W vs kappa(v^2-v0^2)/2, min order over "
                       "dt = 4e-3, 2e-3, 1e-3", orders.min(), 1.9,
                  "errors " + ", ".join(f"{e:.3g}" for e in errors))]
    value, rel = larmor_error()
    checks.append(_le("7", "larmor_kappa relative error (SI electron)", rel,
                      1e-6, f"kappa = {value:.6g} kg s"))
    m = madelung_errors()
    checks.append(_le("8", "plane-wave velocity - hbar k1/m", m["plane wave"],
                      1e-12))
    checks.append(_le("8", "global phase invariance", m["global phase"], 1e-12))
    checks.append(_le("8", "scaling invariance", m["scaling"], 1e-12))
    checks.append(_le("8", "boost shifts velocity by p0/m", m["boost"], 1e-10))
    return checks


# ---------------------------------------------------------------- oracle

ORACLE = dict(length=8.0, x0=0.0, sigma=0.7, p0=-2.0 * math.pi * 2 / 16,
              omega=0.5, levels=((32, 1.2e-2, 50), (64, 6e-3, 100),
                                 (128, 3e-3, 200)))


def oracle_errors(model: DissipationModel, length=8.0, x0=0.0, sigma=0.7,
                  p0=-2.0 * math.pi * 2 / 16, omega=0.5,
                  levels=ORACLE["levels"]) -> list[float]:
    """L2(strang - rk4_reference) under simultaneous dx and dt halving.

    The 64-point level runs 100 steps; all levels share the final time.
    """
    errors = []
    for n, dt, steps in levels:
        grid = make_grid(n, -length, length)
        V = make_potential(grid, "harmonic", omega=omega)
        psi0 = gaussian_packet(grid, x0, sigma, p0)
        fast = evolve(make_state(psi0, grid, V, model, dt=dt), steps).psi
        slow = rk4_reference(OracleConfig(grid, psi0, dt, V, model), steps)
        errors.append(_l2(grid, fast, slow))
    return errors


def oracle_suite() -> list[Check]:
    checks = []
    for model in (DissipationModel(ModelKind.LINEAR_DRAG),
                  DissipationModel(ModelKind.RADIATIVE),
                  DissipationModel(ModelKind.QUADRATIC_DRAG),
                  DissipationModel(ModelKind.QUADRATIC_DRAG,
                                   cube_convention=CubeConvention.SPEED_WEIGHTED)):
        m = with_kappa(model, 0.1)
        errors = oracle_errors(m)
        checks.append(_ge("4", f"strang vs RK4 order, {model_label(m)} kappa=0.1",
                          observed_orders(errors).min(), 1.9,
                          "L2 " + ", ".join(f"{e:.3g}" for e in errors)))
    return checks


# ---------------------------------------------------------------- signatures

def damped_oscillator_extrema(t_end, x0=5.0, omega=1.0, kappa=0.1, mass=1.0):
    """Turning-point amplitudes of m x'' = -m w^2 x - kappa x' (classical)."""
    sol = solve_ivp(lambda t, y: [y[1], -omega ** 2 * y[0] - kappa / mass * y[1]],
                    (0.0, t_end), [x0, 0.0], rtol=1e-11, atol=1e-12,
                    dense_output=True)
    t = np.linspace(0.0, t_end, 200001)
    x = sol.sol(t)[0]
    idx = argrelextrema(np.abs(x), np.greater)[0]
    return np.concatenate([[x0], np.abs(x[idx])])


def signature_runs(kappa=0.1, dt=1e-3, periods=3.0, stride=10):
    out = {}
    for model in (DissipationModel(ModelKind.LINEAR_DRAG, kappa),
                  DissipationModel(ModelKind.RADIATIVE, kappa)):
        state = _damped_state(model, dt)
        rec = ReportRecorder()
        err = ""
        try:
            evolve(state, int(round(periods * 2 * math.pi / dt)), rec, stride)
        except InstabilityError as exc:
            err = str(exc)
        out[model.kind] = (rec, err)
    return out


def _amplitudes(mean_x):
    x = np.abs(mean_x)
    idx = [i for i in range(1, len(x) - 1) if x[i] > x[i - 1] and x[i] >= x[i + 1]]
    return np.concatenate([[x[0]], x[idx]])


def signatures_suite(kappa=0.1) -> list[Check]:
    runs = signature_runs(kappa)
    checks = []
    for kind, (rec, err) in runs.items():
        w = rec.series("work")
        decreases = np.diff(w)
        worst = float(-decreases.min()) if decreases.size else 0.0
        detail = f"run stopped at t={rec.reports[-1].t:.3g}" if err else ""
        checks.append(_le("6", f"largest drop in <W> series, {kind.value}",
                          worst, 0.0, detail))

    rec, err = runs[ModelKind.LINEAR_DRAG]
    amps = _amplitudes(rec.series("mean_x"))
    t_end = rec.reports[-1].t
    classical = damped_oscillator_extrema(3 * 2 * math.pi, kappa=kappa)
    growth = np.diff(amps)
    checks.append(Check("6", "linear_drag |<x>| extrema strictly decreasing "
                             "(max successive change)",
                        float(growth.max()) if growth.size else math.nan, 0.0,
                        bool(growth.size >= 2 and np.all(growth < 0)), "<",
                        f"extrema {np.round(amps, 4).tolist()}, t_end={t_end:.3g}"
                        + ("; unstable" if err else "")))
    envelope = math.exp(-kappa * math.pi / 2.0)
    q_ratio = amps[1:] / amps[:-1]
    c_ratio = classical[1:] / classical[:-1]
    n = min(len(q_ratio), len(c_ratio))
    dev = float(np.max(np.abs(q_ratio[:n] / envelope - 1.0))) if n >= 2 else math.inf
    checks.append(_le("6", "extrema ratio vs classical envelope exp(-k T/2 / 2m)",
                      dev, 0.15,
                      f"quantum ratios {np.round(q_ratio, 4).tolist()}, "
                      f"classical ODE {np.round(c_ratio[:3], 4).tolist()}, "
                      f"envelope {envelope:.4f}"))
    return checks


SUITES: dict[str, Callable[[], list[Check]]] = {
    "linear-limit": linear_limit_suite,
    "convergence": convergence_suite,
    "closed-form": closed_form_suite,
    "oracle": oracle_suite,
    "signatures": signatures_suite,
}
