"""
Inverse mean curvature flow of coordinate slices
================================================

Slices stay slices under the flow, their area grows like e^t and the
warping factor like e^(t/(n-1)).  They are also the equality cases of the
quermassintegral inequality, so L stays at (n-1) theta eps.
"""

import numpy as np

from alhimcf import AmbientModel, FlowConfig, GraphState, run
from alhimcf.warped import lam, s_from_r

for amb in (AmbientModel(3, 0), AmbientModel(3, -1, genus=2)):
    eps = amb.epsilon
    s0 = GraphState(amb, s_from_r(2.0, eps))
    trace = run(s0, FlowConfig(t_end=5.0, record_dt=1.0))
    t, A, L = trace["t"], trace["area"], trace["L"]
    print(f"eps={eps}: theta={amb.theta:.6f}")
    for k in range(len(t)):
        print(f"  t={t[k]:.0f}  area e^-t = {A[k] * np.exp(-t[k]):.12f}  L = {L[k]:+.10f}")
    lam_end = lam(trace.final_state.u, eps)
    print(f"  lambda(5) / (lambda(0) e^2.5) = {lam_end / (lam(s0.u, eps) * np.exp(2.5)):.14f}")
