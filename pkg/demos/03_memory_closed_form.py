"""The acceleration-drag memory integral has a closed form.

With g = kappa v a the work field at fixed x is

    W(x, t) = kappa int_0^t v dv/dt' dt' = kappa (v(t)^2 - v(0)^2) / 2,

so the trapezoid accumulation in the stepper can be checked exactly.  The
acceleration comes from a three-point backward difference once two past
velocity fields exist; the error then falls as dt^2.
"""
import numpy as np

from radwave import larmor_kappa
from radwave.validation import (ELEMENTARY_CHARGE, LIGHT_SPEED, VACUUM_PERMITTIVITY,
                                closed_form_errors, observed_orders)

dts = (4e-3, 2e-3, 1e-3, 5e-4)
errors = closed_form_errors(dts=dts)
orders = observed_orders(errors)
print(f"{'dt':>8} {'max |W - closed form|':>24} {'order':>7}")
for i, (dt, e) in enumerate(zip(dts, errors)):
    order = f"{orders[i - 1]:7.3f}" if i else ""
    print(f"{dt:8.1e} {e:24.3e} {order}")

# the radiative model uses the Larmor coefficient; in SI units it is tiny,
# which is why runs use a natural-unit kappa instead
kappa = larmor_kappa(ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY, LIGHT_SPEED)
print(f"\nLarmor coefficient 2e^2/(3 4pi eps0 c^3) = {kappa:.6e} kg s")
print(f"power radiated at a = 1e20 m/s^2: {kappa * 1e40:.3e} W")
