"""Velocity and acceleration fields read off a wavefunction.

v = (hbar/m) Im(psi* psi') / |psi|^2 is the phase gradient over m, computed
without ever taking a logarithm, so no unwrapping is needed.  Below a
density floor (relative to the peak) the phase means nothing and v is set
to zero.
"""
import numpy as np

from radwave import density, gaussian_packet, make_grid, madelung_fields, velocity_field
from radwave.validation import nodeless_state

grid = make_grid(512, -20, 20)
p0 = grid.wavenumbers[16]

psi = gaussian_packet(grid, 0.0, 1.0, p0)
for floor in (1e-12, 1e-6):
    v = velocity_field(psi, grid, density_floor=floor)
    rho = density(psi)
    inside = rho >= floor * rho.max()
    print(f"boosted packet, floor {floor:.0e}: {inside.sum()} points carry flow, "
          f"max |v - p0| = {np.max(np.abs(v[inside] - p0)):.1e}")
# at the 1e-12 floor the far tails have |psi| ~ 1e-6 and FFT roundoff
# divided by that gives ~1e-9; the raised floor trims those points

smooth = nodeless_state(grid)
base = velocity_field(smooth, grid)
print("\nnodeless periodic state")
print("  phase invariance :", np.max(np.abs(velocity_field(np.exp(2.1j) * smooth, grid) - base)))
print("  scale invariance :", np.max(np.abs(velocity_field(-3.7j * smooth, grid) - base)))
boosted = velocity_field(smooth * np.exp(1j * p0 * grid.x), grid)
print("  boost shift error:", np.max(np.abs(boosted - base - p0)))

# acceleration: backward difference of two velocity fields dt apart.  The
# phase ramp must be periodic on the grid, so the push is one wavenumber.
dt = 0.1
k1 = grid.wavenumbers[1]
later = smooth * np.exp(1j * k1 * grid.x)
f = madelung_fields(later, grid, v_prev=base, dt=dt)
print(f"\nuniform push of k1 = {k1:.6f} over dt = {dt}: acceleration in",
      f"[{f.acceleration.min():.6f}, {f.acceleration.max():.6f}], expected {k1 / dt:.6f}")
