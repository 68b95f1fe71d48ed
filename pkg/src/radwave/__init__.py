"""Nonlinear memory-integral Schrödinger equations in one dimension."""
from .diagnostics import EnergyReport, ReportRecorder, energy_report
from .dissipation import (CubeConvention, DissipationModel, ModelKind,
                          integrand, larmor_kappa)
from .grid import Grid, make_grid, spectral_derivative
from .madelung import (MadelungFields, acceleration_field, density,
                       madelung_fields, velocity_field)
from .memory import WorkField, accel_drag_closed_form, update_work
from .oracle import OracleConfig, OracleResult, rk4_reference, rk4_run
from .scenarios import (SCENARIOS, PotentialKind, Scenario, gaussian_packet,
                        get_scenario, make_potential)
from .stepper import (InstabilityError, SimState, cn_step, evolve, make_state,
                      strang_step)

__version__ = "0.1.0"
