"""Linear drag in a harmonic well: what the memory term actually does.

A classical particle with drag kappa v loses amplitude by exp(-kappa pi/2)
per half period.  In the wave equation the accumulated work W(x, t) acts as
a potential.  It grows fastest where the packet moves fastest, then stays
behind it, and its slope pushes the packet on.  The printout shows |<x>| at
the first turning point, the source and transport parts of d<W>/dt, and
where the run stops.
"""
import math

import numpy as np

from radwave import (DissipationModel, InstabilityError, ModelKind, ReportRecorder,
                     energy_report, evolve, gaussian_packet, make_grid, make_potential,
                     make_state, strang_step)
from radwave.madelung import density
from radwave.validation import damped_oscillator_extrema

kappa, dt = 0.1, 1e-3
grid = make_grid(512, -20, 20)
V = make_potential(grid, "harmonic")
psi0 = gaussian_packet(grid, 5.0, 0.5)

classical = damped_oscillator_extrema(3 * 2 * math.pi, kappa=kappa)
print("classical turning points:", np.round(classical[:4], 4))

for kind in (ModelKind.NONE, ModelKind.LINEAR_DRAG, ModelKind.RADIATIVE):
    state = make_state(psi0, grid, V, DissipationModel(kind, kappa), dt=dt)
    rec = ReportRecorder()
    note = "completed 3 periods"
    try:
        evolve(state, int(3 * 2 * math.pi / dt), rec, 10)
    except InstabilityError as exc:
        note = f"stopped: {exc}"
    x = np.abs(rec.series("mean_x"))
    peaks = [x[0]] + [x[i] for i in range(1, len(x) - 1) if x[i - 1] < x[i] >= x[i + 1]]
    w = rec.series("work")
    drops = np.flatnonzero(np.diff(w) < 0)
    first_drop = f"{rec.series('t')[drops[0]]:.2f}" if drops.size else "never"
    print(f"\n{kind.value}")
    print("  |<x>| turning points:", np.round(peaks[:4], 4))
    print("  <W> first decreases at t =", first_drop)
    print(" ", note)

# d<W>/dt = <g> + int W d(rho)/dt at t = 2 for linear drag
s = evolve(make_state(psi0, grid, V, DissipationModel(ModelKind.LINEAR_DRAG, kappa), dt=dt), 1999)
a = strang_step(s)
b = strang_step(a)
source = energy_report(a).dissipated_power
transport = grid.integrate(a.work.w * (density(b.psi) - density(s.psi)) / (2 * dt))
print(f"\nat t = 2: source <g> = {source:.4f}, transport = {transport:.4f}")
