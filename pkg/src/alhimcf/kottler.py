"""Kottler black holes: horizon, mass-area algebra, curvature and embedding.

The Kottler metric is ``dr^2/rho_m(r)^2 + r^2 h`` with
``rho_m(r) = sqrt(r^2 + eps - 2 m / r^(n-2))``.  Its horizon sits at the
unique positive zero of ``f(r) = r^n + eps r^(n-2) - 2 m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .warped import AmbientModel, DomainError, rho

__all__ = [
    "KottlerParams",
    "InvalidParameter",
    "f_eval",
    "horizon_radius",
    "rho_m",
    "critical_mass",
    "mass_from_area",
    "penrose_bound",
    "haw_bound",
    "sectional_curvatures",
    "scalar_curvature",
    "embedding_profile",
    "kottler_boundary_mass",
    "embedding_dudr",
    "induced_metric_residual",
    "staticity_residual",
]


class InvalidParameter(ValueError):
    """Parameters outside the range where an operation is defined."""


@dataclass(frozen=True)
class KottlerParams:
    ambient: AmbientModel
    m: float

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def epsilon(self) -> int:
        return self.ambient.epsilon

    @property
    def r_h(self) -> float:
        return horizon_radius(self)


def f_eval(r, params: KottlerParams):
    """``r^n + eps r^(n-2) - 2m``."""
    n, eps = params.n, params.epsilon
    return r**n + eps * r ** (n - 2) - 2.0 * params.m


def _f_prime(r, n, eps):
    return n * r ** (n - 1) + eps * (n - 2) * r ** (n - 3)


def horizon_radius(params: KottlerParams) -> float:
    """Unique positive zero of :func:`f_eval` (bisection, then Newton)."""
    m, n, eps = params.m, params.n, params.epsilon
    if not m > 0:
        raise InvalidParameter(f"horizon needs m > 0, got m={m!r}")
    a = (2.0 * m) ** (1.0 / n)
    lo = max(1.0 if eps == -1 else 0.0, a / 2.0)
    hi = a + 2.0
    f = lambda r: f_eval(r, params)
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise InvalidParameter(f"bracket [{lo}, {hi}] does not enclose the horizon")
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    # f is convex and increasing past r = 1 (eps = -1) or 0, so Newton from
    # the right end of the bracket converges monotonically.
    r = hi
    for _ in range(60):
        step = f(r) / _f_prime(r, n, eps)
        r_new = r - step
        if not lo <= r_new <= hi:
            r_new = 0.5 * (lo + hi)
        if abs(r_new - r) <= 4e-16 * r:
            r = r_new
            break
        r = r_new
    return float(r)


def rho_m(r, params: KottlerParams):
    """Static potential of the Kottler metric; vanishes on the horizon."""
    n, eps, m = params.n, params.epsilon, params.m
    r = np.asarray(r, dtype=float)
    if m == 0:
        return rho(r, eps)
    q = r * r + eps - 2.0 * m / r ** (n - 2)
    if m > 0:
        r_h = horizon_radius(params)
        if np.any(r < r_h * (1.0 - 1e-14)):
            raise DomainError(f"r below the horizon r_h={r_h}")
        q = np.maximum(q, 0.0)
    elif np.any(q < 0):
        raise DomainError("rho_m undefined")
    out = np.sqrt(q)
    return out if out.ndim else float(out)


def critical_mass(n: int) -> float:
    """Most negative mass for which eps = -1 Kottler data is a black hole."""
    if n < 3:
        raise InvalidParameter("n must be >= 3")
    return -((n - 2) ** ((n - 2) / 2.0)) / n ** (n / 2.0)


def mass_from_area(area, ambient: AmbientModel):
    """Kottler mass whose horizon has the given area.

    Also the right-hand side of the Penrose-type bound (see :func:`penrose_bound`).
    """
    if np.any(np.asarray(area) <= 0):
        raise InvalidParameter("area must be positive")
    n, eps = ambient.n, ambient.epsilon
    a_hat = np.asarray(area, dtype=float) / ambient.theta
    out = 0.5 * (a_hat ** (n / (n - 1.0)) + eps * a_hat ** ((n - 2.0) / (n - 1.0)))
    return out if out.ndim else float(out)


penrose_bound = mass_from_area


def haw_bound(area, genus: int):
    """Genus form of the n = 3 Penrose bound."""
    if int(genus) != genus or genus < 1:
        raise InvalidParameter(f"genus must be an integer >= 1, got {genus!r}")
    theta2 = 4.0 * math.pi * (genus - 1) if genus >= 2 else 4.0 * math.pi
    area = np.asarray(area, dtype=float)
    out = (
        (4.0 * math.pi / theta2) ** 1.5
        * np.sqrt(area / (16.0 * math.pi))
        * (1.0 - genus + area / (4.0 * math.pi))
    )
    return out if out.ndim else float(out)


def sectional_curvatures(r, params: KottlerParams) -> Tuple[float, float]:
    """Radial and tangential sectional curvatures of the Kottler metric.

    The tangential curvature decays like ``r^-n``; this is the only exponent
    compatible with scalar curvature ``-n(n-1)``.
    """
    n, m = params.n, params.m
    r = np.asarray(r, dtype=float)
    if m > 0 and np.any(r <= horizon_radius(params)):
        raise DomainError("sectional curvatures are evaluated outside the horizon")
    radial = -1.0 - (n - 2) * m / r**n
    tangential = -1.0 + 2.0 * m / r**n
    if radial.ndim == 0:
        return float(radial), float(tangential)
    return radial, tangential


def scalar_curvature(r, params: KottlerParams):
    """Scalar curvature rebuilt from the sectional curvatures."""
    n = params.n
    radial, tangential = sectional_curvatures(r, params)
    return 2.0 * ((n - 1) * radial + 0.5 * (n - 1) * (n - 2) * tangential)


# --------------------------------------------------------------------------
# graph embedding of the Kottler slice in (Q_eps, g_eps bar)
# --------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _difference_quotient(r_h, y, n, eps):
    """``f(r_h + y) / y`` expanded so that no cancellation occurs near y = 0."""
    # ((a + y)^k - a^k) / y = sum_{j>=1} C(k, j) a^(k-j) y^(j-1)
    def dq(k):
        return sum(math.comb(k, j) * r_h ** (k - j) * y ** (j - 1) for j in range(1, k + 1))

    q = dq(n)
    if eps and n > 2:
        q = q + eps * dq(n - 2)
    return q


def _embedding_integrand_x(x, params: KottlerParams, r_h: float):
    """``du/dx`` under the substitution ``r = r_h + x^2`` (smooth at x = 0)."""
    n, eps, m = params.n, params.epsilon, params.m
    y = x * x
    r = r_h + y
    q = _difference_quotient(r_h, y, n, eps)
    return 2.0 * math.sqrt(2.0 * m) / ((r * r + eps) * np.sqrt(q))


def embedding_dudr(r, params: KottlerParams):
    """Slope of the Kottler graph, ``sqrt(1/rho_m^2 - 1/rho^2) / rho``."""
    n, eps, m = params.n, params.epsilon, params.m
    r = np.asarray(r, dtype=float)
    if m == 0:
        return np.zeros_like(r)
    rm = rho_m(r, params)
    with np.errstate(divide="ignore"):
        return np.sqrt(2.0 * m / r ** (n - 2)) / ((r * r + eps) * rm)


def embedding_profile(params: KottlerParams, r_max: float, step: float) -> np.ndarray:
    """Tabulate the Kottler graph ``u(r)`` from the horizon out to ``r_max``.

    Returns an array with columns ``(r, u, du/dr)``; the first row is the
    horizon, where ``u = 0`` and the slope is infinite.
    """
    n, eps, m = params.n, params.epsilon, params.m
    if step <= 0:
        raise InvalidParameter("step must be positive")
    if m < 0:
        raise InvalidParameter("embedding needs m >= 0")
    if m == 0:
        r0 = 1.0 if eps == -1 else step
        if r_max <= r0:
            raise InvalidParameter("r_max must exceed the starting radius")
        r = np.append(np.arange(r0, r_max, step), r_max)
        if r[-1] - r[-2] < 1e-12:
            r = r[:-1]
        return np.column_stack([r, np.zeros_like(r), np.zeros_like(r)])
    r_h = horizon_radius(params)
    if r_max <= r_h:
        raise InvalidParameter(f"r_max must exceed r_h={r_h}")
    count = int(math.floor((r_max - r_h) / step + 1e-9))
    r = r_h + step * np.arange(count + 1)
    if r_max - r[-1] > 1e-12 * r_max:
        r = np.append(r, r_max)
    x = np.sqrt(r - r_h)
    half = 0.5 * np.diff(x)
    mid = 0.5 * (x[1:] + x[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    pieces = half * (_embedding_integrand_x(nodes, params, r_h) @ _GL_WEIGHTS)
    u = np.concatenate([[0.0], np.cumsum(pieces)])
    dudr = np.empty_like(r)
    dudr[0] = np.inf
    dudr[1:] = embedding_dudr(r[1:], params)
    return np.column_stack([r, u, dudr])


def induced_metric_residual(profile: np.ndarray, params: KottlerParams) -> float:
    """Max relative mismatch of ``rho^2 u'^2 + 1/rho^2`` against ``1/rho_m^2``."""
    r, dudr = profile[1:, 0], profile[1:, 2]
    eps = params.epsilon
    rr = r * r + eps
    lhs = rr * dudr**2 + 1.0 / rr
    rhs = 1.0 / rho_m(r, params) ** 2
    return float(np.max(np.abs(lhs - rhs) / rhs))


def kottler_boundary_mass(params: KottlerParams) -> float:
    """``c_n * int rho H`` over the horizon slice; equals ``m``."""
    from .hypersurface import GraphState
    from .functionals import functionals_of
    from .warped import s_from_r

    r_h = horizon_radius(params)
    state = GraphState(params.ambient, s_from_r(r_h, params.epsilon))
    I = functionals_of(state).I
    return params.ambient.c_n * I


def staticity_residual(params: KottlerParams, r, h: float = 1e-2):
    """Traced static equation ``(n-1) Lap(rho_m) + rho_m R`` with ``R = -n(n-1)``.

    For ``g = dr^2/psi^2 + r^2 h`` and ``psi = rho_m`` one has
    ``Lap psi = psi r^(1-n) (r^(n-1) (psi^2)'/2)'``; both derivatives act on
    the smooth function ``psi^2`` and use five-point stencils.  Returned
    relative to ``n (n-1) rho_m``.
    """
    n = params.n
    r = np.asarray(r, dtype=float)
    if params.m > 0 and np.any(r <= horizon_radius(params)):
        raise DomainError("staticity is checked outside the horizon")

    def d1(f, x):
        return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)

    psi2 = lambda x: x * x + params.epsilon - 2.0 * params.m / x ** (n - 2)
    flux = lambda x: x ** (n - 1) * 0.5 * d1(psi2, x)
    lap_over_psi = d1(flux, r) / r ** (n - 1)
    # (n-1) psi (lap/psi) - n(n-1) psi, divided by n(n-1) psi
    return np.abs(lap_over_psi - n) / n
