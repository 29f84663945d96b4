"""
Sampling the geometric inequalities
===================================

Random strictly mean convex graphs over the flat torus all have
nonnegative quermassintegral and Heintze-Karcher type deficits.  The
deficits shrink quadratically as the graph approaches a slice.
"""

import numpy as np

from alhimcf import AmbientModel, functionals as fn
from alhimcf.hypersurface import minkowski_residual, torus_graph
from alhimcf.verification import random_torus_graph

rng = np.random.default_rng(0)
af, br = [], []
for _ in range(100):
    st = random_torus_graph(rng)
    af.append(fn.af_deficit(st))
    br.append(fn.brendle_deficit(st))
print(f"af_deficit      min {min(af):.4e}  median {np.median(af):.4e}")
print(f"brendle_deficit min {min(br):.4e}  median {np.median(br):.4e}")

amb = AmbientModel(3, 0)
for delta in (0.2, 0.1, 0.05, 0.025):
    st = torus_graph(amb, 64, 1.0, [((1, 0), delta, 0.0)])
    print(f"delta={delta:<6} af={fn.af_deficit(st):.6e}  brendle={fn.brendle_deficit(st):.6e}")

# The Minkowski identity holds to second order in the grid spacing.
modes = [((1, 0), 0.15, 0.0), ((1, 1), 0.0, 0.1)]
res = [minkowski_residual(torus_graph(amb, M, 1.0, modes)) for M in (32, 64, 128)]
print("Minkowski residuals", res, "orders", np.log2(np.array(res[:-1]) / np.array(res[1:])))
