"""
Flow of a perturbed flat torus
==============================

u0 = 1 + 0.1 cos(theta_1) + 0.05 cos(theta_2) over the flat 2-torus in the
eps = 0 model.  The mean curvature relaxes to n - 1 = 2 at the rate t e^-t
and the rescaled slope |Dv| decays, but the rescaled height
u - t/2 keeps its shape: the tangential diffusion is damped by
lambda^-2 ~ e^-t, so each Fourier mode only decays by a bounded factor.
As a result J - K is positive from the start and L grows with the area.
"""

import numpy as np

from alhimcf import functionals as fn
from alhimcf.verification import standard_initial_state, standard_run

trace = standard_run(12.0, 0.1)
t = trace["t"]
print(" t     maxH-2       max|Dv|     w_range     J-K          L")
for k in range(0, len(t), 20):
    print(f"{t[k]:4.1f}  {trace['maxH'][k] - 2:.4e}  {trace['max_grad_v'][k]:.4e}  "
          f"{trace['w_range'][k]:.4e}  {trace['J'][k] - trace['K'][k]:+.4e}  {trace['L'][k]:+.4e}")

sel = t >= 6.0
k, C, r2 = fn.fit_decay_exponent(t[sel], trace["maxH"][sel] - 2.0)
print(f"maxH - 2 ~ C t e^(-k t): k={k:.4f}, C={C:.4g}, R2={r2:.5f}")

u0 = standard_initial_state().u
u12 = trace.final_state.u - 12.0 / 2
print("shape of u - t/2: initial range", np.ptp(u0), "final range", np.ptp(u12))
print(fn.reports_table(fn.monotonicity_report(trace) + fn.asymptotics_report(trace)))
