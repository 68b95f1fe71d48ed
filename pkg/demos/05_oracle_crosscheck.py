"""Split-step Fourier against a brute-force RK4 reference.

The reference uses finite differences in space and classical RK4 in time,
so it shares no discretisation with the production stepper.  Refining
dx and dt together, the gap between the two closes at second order for
every nonlinear model.
"""
from radwave import CubeConvention, DissipationModel, ModelKind
from radwave.validation import ORACLE, model_label, observed_orders, oracle_errors

models = [DissipationModel(ModelKind.LINEAR_DRAG, 0.1),
          DissipationModel(ModelKind.RADIATIVE, 0.1),
          DissipationModel(ModelKind.QUADRATIC_DRAG, 0.1),
          DissipationModel(ModelKind.QUADRATIC_DRAG, 0.1, CubeConvention.SPEED_WEIGHTED),
          DissipationModel(ModelKind.ACCEL_DRAG, 0.1)]

levels = ORACLE["levels"]
print("levels (points, dt, steps):", levels)
for m in models:
    errs = oracle_errors(m)
    orders = observed_orders(errs)
    print(f"{model_label(m):31s} L2 " + "  ".join(f"{e:.3e}" for e in errs)
          + "   orders " + "  ".join(f"{o:.2f}" for o in orders))
