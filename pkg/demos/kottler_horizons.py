"""
Kottler horizons, masses and curvature
======================================

Horizon radius, horizon area and the mass recovered from that area, for a
few static black holes in both the flat (eps = 0) and hyperbolic (eps = -1)
models.
"""

import math

import numpy as np

from alhimcf import AmbientModel
from alhimcf import kottler as kt

cases = [
    (AmbientModel(3, 0), 4.0),
    (AmbientModel(3, -1, genus=2), 3.0),
    (AmbientModel(4, -1, theta=4 * math.pi), 6.0),
    (AmbientModel(5, 0), 0.25),
]

print(f"{'n':>2} {'eps':>3} {'m':>6} {'r_h':>10} {'area':>12} {'m(area)':>10} {'boundary':>10}")
for amb, m in cases:
    p = kt.KottlerParams(amb, m)
    r_h = kt.horizon_radius(p)
    area = amb.theta * r_h ** (amb.n - 1)
    print(f"{amb.n:>2} {amb.epsilon:>3} {m:>6g} {r_h:>10.6f} {area:>12.6f} "
          f"{kt.mass_from_area(area, amb):>10.6f} {kt.kottler_boundary_mass(p):>10.6f}")

# Sectional curvatures approach -1 far from the horizon; the combination
# 2 (n-1) K_rad + (n-1)(n-2) K_tan stays at -n(n-1) everywhere.
p = kt.KottlerParams(AmbientModel(3, 0), 4.0)
for r in (2.01, 3.0, 10.0, 100.0):
    rad, tan = kt.sectional_curvatures(r, p)
    print(f"r={r:7.2f}  K_rad={rad:+.6f}  K_tan={tan:+.6f}  R={2 * (2 * rad + tan):+.12f}")

# Negative masses are allowed for eps = -1 down to the critical value.
for n in (3, 4, 5):
    print(f"n={n}: critical mass {kt.critical_mass(n):.10f}")

# The genus form of the bound agrees with the area form.
for genus in (2, 3):
    area = np.array([1.0, 2.0, 5.0]) * 4 * math.pi * (genus - 1)
    print(f"genus {genus}: haw_bound {np.round(kt.haw_bound(area, genus), 8)}")
