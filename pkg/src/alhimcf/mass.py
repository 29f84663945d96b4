"""Mass of radially symmetric asymptotically locally hyperbolic data.

A symmetric metric ``dr^2/psi(r)^2 + r^2 h`` is stored through its deviation
``delta = rho^2 - psi^2`` from the reference potential ``rho^2 = r^2 + eps``.
Curvatures and fluxes are linear in ``delta``, so working with it avoids the
cancellation of two O(r^2) quantities at large radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, interpolate, optimize

from .kottler import KottlerParams, haw_bound, horizon_radius, mass_from_area
from .warped import AmbientModel, DomainError, rho, s_from_r

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)

__all__ = [
    "RadialMetricProfile",
    "LinearizationError",
    "NonMeanConvexHorizon",
    "flux_mass_at",
    "extrapolate_power_law",
    "flux_mass_limit",
    "theta_graph",
    "scalar_curvature_symmetric",
    "graph_mass_formula",
    "MassDecomposition",
    "PenroseCertificate",
    "penrose_certificate",
    "profile_from_csv",
]


class LinearizationError(ValueError):
    """The flux formula is linear in the metric deviation; it is too large here."""


class NonMeanConvexHorizon(ValueError):
    pass


@dataclass(frozen=True)
class RadialMetricProfile:
    """Radial metric ``dr^2/psi^2 + r^2 h`` with ``psi^2 = r^2 + eps - delta``.

    ``r_min`` is the inner boundary (the horizon, where ``psi`` vanishes) and
    ``r_max`` the outer end of the data, ``inf`` for closed-form profiles.
    """

    ambient: AmbientModel
    delta: Callable
    ddelta: Callable
    r_min: float
    r_max: float = math.inf
    label: str = "profile"
    knots: Optional[np.ndarray] = None

    def psi2(self, r):
        r = np.asarray(r, dtype=float)
        return r * r + self.ambient.epsilon - self.delta(r)

    def dpsi2(self, r):
        return 2.0 * np.asarray(r, dtype=float) - self.ddelta(r)

    def e_rr(self, r):
        """Radial component of ``g - g_eps`` in coordinates."""
        r = np.asarray(r, dtype=float)
        return self.delta(r) / (self.psi2(r) * (r * r + self.ambient.epsilon))

    def dudr(self, r):
        """Slope of the graph in ``(Q_eps, g_eps bar)`` inducing this metric."""
        r = np.asarray(r, dtype=float)
        e = self.e_rr(r)
        if np.any(e < 0):
            raise DomainError("psi > rho somewhere: the metric is not a graph")
        return np.sqrt(e) / rho(r, self.ambient.epsilon)

    # constructors -----------------------------------------------------------

    @classmethod
    def kottler(cls, params: KottlerParams) -> "RadialMetricProfile":
        n, m = params.n, params.m
        r_min = horizon_radius(params) if m > 0 else (1.0 if params.epsilon == -1 else 0.0)
        return cls(
            params.ambient,
            lambda r: 2.0 * m * np.asarray(r, dtype=float) ** (2 - n),
            lambda r: -2.0 * (n - 2) * m * np.asarray(r, dtype=float) ** (1 - n),
            r_min,
            label=f"kottler(n={n}, eps={params.epsilon}, m={m:g})",
        )

    @classmethod
    def from_deviation(cls, ambient, delta, ddelta, bracket=None, r_min=None, label="profile"):
        """Profile from ``delta`` and its derivative; the horizon is the root of ``psi^2``."""
        prof = cls(ambient, delta, ddelta, math.nan, label=label)
        if r_min is None:
            if bracket is None:
                raise ValueError("give r_min or a bracket for the horizon")
            r_min = optimize.brentq(lambda r: float(prof.psi2(r)), *bracket, xtol=1e-15, rtol=1e-15)
        return cls(ambient, delta, ddelta, float(r_min), label=label)

    @classmethod
    def from_samples(cls, ambient, r, delta, label="sampled"):
        """Profile from tabulated ``delta``; derivatives from a cubic spline."""
        r = np.asarray(r, dtype=float)
        spline = interpolate.CubicSpline(r, np.asarray(delta, dtype=float))
        d1 = spline.derivative()
        return cls(ambient, spline, d1, float(r[0]), float(r[-1]), label=label, knots=r)


def theta_graph(ambient: AmbientModel, r, dudr):
    """Vertical component ``<d/dtau, N>`` of the unit normal of ``tau = u(r)``.

    In ``rho^2 dtau^2 + dr^2/rho^2 + r^2 h`` the normal of the graph is the
    normalized gradient of ``tau - u(r)``, which gives
    ``rho / sqrt(1 + rho^4 u'^2)``.
    """
    rr = rho(r, ambient.epsilon)
    dudr = np.asarray(dudr, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(np.isinf(dudr), 0.0, rr / np.sqrt(1.0 + rr**4 * dudr**2))
    return out if out.ndim else float(out)


def scalar_curvature_symmetric(profile: RadialMetricProfile) -> Callable:
    """Scalar curvature ``r -> R(r)`` of ``dr^2/psi^2 + r^2 h``.

    ``R = (n-1) [(n-2)(eps - psi^2)/r^2 - (psi^2)'/r]``, evaluated as
    ``-n(n-1) + (n-1) [(n-2) delta / r^2 + delta' / r]``.
    """
    n = profile.ambient.n

    def R(r):
        out = -n * (n - 1) + _scalar_excess(profile, r)
        return out if np.ndim(out) else float(out)

    return R


def _scalar_excess(profile: RadialMetricProfile, r):
    """``R + n(n-1)`` without the cancellation of forming ``R`` first."""
    n = profile.ambient.n
    r = np.asarray(r, dtype=float)
    return (n - 1) * ((n - 2) * profile.delta(r) / r**2 + profile.ddelta(r) / r)


def flux_mass_at(profile: RadialMetricProfile, r: float) -> float:
    """Mass flux through the coordinate sphere ``N_r``.

    For ``e = e_rr dr^2`` the integrand reduces as follows (``nu = rho d_r``,
    ``E = rho^2 e_rr``): ``(div e - d tr e)(nu) = (n-1) rho E / r`` while the
    two terms carrying ``d rho`` cancel.  Hence the flux is
    ``c_n theta r^(n-1) (n-1) rho^2 E / r``.
    """
    amb = profile.ambient
    n, eps = amb.n, amb.epsilon
    if not profile.r_min < r <= profile.r_max:
        raise DomainError(f"r={r} outside the profile domain")
    rho2 = r * r + eps
    E = rho2 * float(profile.e_rr(r))
    if abs(E) >= 0.5:
        raise LinearizationError(f"|e(nu, nu)| = {abs(E):.3g} >= 0.5 at r={r}")
    return amb.c_n * amb.theta * r ** (n - 1) * (n - 1) * rho2 * E / r


def extrapolate_power_law(values: Sequence[float]) -> float:
    """Limit of ``F(r) = F_inf + C r^-p`` sampled on a geometric sequence of radii.

    Three values fix ``F_inf``, ``C`` and the exponent (Aitken's delta-squared).
    """
    f1, f2, f3 = (float(v) for v in values)
    d1, d2 = f2 - f1, f3 - f2
    if d2 == 0.0 or d1 == d2:
        return f3
    return f3 + d2 * d2 / (d1 - d2)


def flux_mass_limit(profile: RadialMetricProfile, radii: Sequence[float] = (10.0, 100.0, 1000.0)) -> float:
    """Extrapolated mass from fluxes on a geometric sequence of three radii."""
    vals = [flux_mass_at(profile, r) for r in radii]
    return extrapolate_power_law(vals)


@dataclass(frozen=True)
class MassDecomposition:
    bulk: float
    boundary: float

    @property
    def total(self) -> float:
        return self.bulk + self.boundary


def graph_mass_formula(profile: RadialMetricProfile) -> MassDecomposition:
    """Bulk and horizon contributions to the mass of a symmetric graph.

    ``bulk = c_n int Theta (R + n(n-1)) dM`` over ``r > r_min`` and
    ``boundary = c_n int rho H`` over the horizon slice.
    """
    amb = profile.ambient
    n, eps = amb.n, amb.epsilon
    r0 = profile.r_min
    H0 = (n - 1) * rho(r0, eps) / r0 if r0 > 0 else math.nan
    if not H0 >= 0:
        raise NonMeanConvexHorizon(f"horizon mean curvature {H0} < 0")

    def integrand(r):
        psi2 = profile.psi2(r)
        dM = r ** (n - 1) / np.sqrt(psi2)  # per unit cross-section area
        return theta_graph(amb, r, profile.dudr(r)) * _scalar_excess(profile, r) * dM

    if profile.knots is not None:
        # spline data: the integrand is only piecewise smooth, so use a fixed
        # rule on every knot interval; r = r0 + x^2 on the first one absorbs
        # the 1/psi singularity at the horizon
        knots = np.asarray(profile.knots, dtype=float)
        a, b = knots[1:-1], knots[2:]
        half, mid = 0.5 * (b - a), 0.5 * (b + a)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        total = float(np.sum(half * (integrand(nodes) @ _GL_WEIGHTS)))
        xb = math.sqrt(knots[1] - r0)
        x = 0.5 * xb * (1.0 + _GL_NODES)
        total += 0.5 * xb * float(np.dot(_GL_WEIGHTS, integrand(r0 + x * x) * 2.0 * x))
    else:
        # the boundary term r0^n sets the size of the answer; Kottler data has
        # a bulk integrand made of rounding noise, so a pure epsrel would stall
        opts = dict(limit=200, epsabs=1e-13 * max(r0, 1.0) ** n, epsrel=1e-10)
        r_split = min(2.0 * r0, profile.r_max)
        xb = math.sqrt(r_split - r0)
        total = integrate.quad(lambda x: float(integrand(r0 + x * x)) * 2.0 * x, 0.0, xb, **opts)[0]
        if r_split < profile.r_max:
            total += integrate.quad(lambda r: float(integrand(r)), r_split, profile.r_max, **opts)[0]
    bulk = amb.c_n * amb.theta * total

    from .functionals import functionals_of
    from .hypersurface import GraphState

    horizon = GraphState(amb, s_from_r(r0, eps))
    boundary = amb.c_n * functionals_of(horizon).I
    return MassDecomposition(bulk, boundary)


@dataclass
class PenroseCertificate:
    mass: float
    area: float
    bound: float
    tolerance: float
    ambient: AmbientModel
    haw: Optional[float] = None
    effective: bool = True

    @property
    def deficit(self) -> float:
        return self.mass - self.bound

    @property
    def passed(self) -> bool:
        return self.deficit >= -self.tolerance

    def text(self) -> str:
        amb = self.ambient
        lines = [
            f"ambient       n={amb.n} eps={amb.epsilon} theta={amb.theta:.12g}",
            f"mass          {self.mass:.12g}",
            f"horizon area  {self.area:.12g}",
            f"bound         {self.bound:.12g}",
            f"deficit       {self.deficit:.6e}",
        ]
        if self.haw is not None:
            lines.append(f"genus bound   {self.haw:.12g}")
        if not self.effective:
            lines.append("note          bound non-effective (normalized area <= 1)")
        lines.append(f"result        {'PASS' if self.passed else 'FAIL'} (tol {self.tolerance:g})")
        return "\n".join(lines)


def penrose_certificate(area: float, ambient: AmbientModel, mass: float, tolerance: float = 1e-8) -> PenroseCertificate:
    """Compare a total mass with the Penrose-type bound of its horizon area."""
    bound = mass_from_area(area, ambient)
    haw = None
    if ambient.n == 3 and ambient.genus is not None:
        haw = haw_bound(area, ambient.genus)
    effective = not (ambient.epsilon == -1 and area / ambient.theta <= 1.0)
    return PenroseCertificate(mass, area, bound, tolerance, ambient, haw, effective)


def profile_from_csv(path, ambient: AmbientModel) -> RadialMetricProfile:
    """Read ``r,psi2`` or ``r,u,dudr`` columns (``#`` lines are comments)."""
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: no data")
    header = [c.strip() for c in lines[0].split(",")]
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    eps = ambient.epsilon
    r = data[:, 0]
    rho2 = r * r + eps
    if header == ["r", "psi2"]:
        delta = rho2 - data[:, 1]
    elif header == ["r", "u", "dudr"]:
        X = rho2**2 * data[:, 2] ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(np.isinf(X), 1.0, X / (1.0 + X))
        delta = rho2 * frac
    else:
        raise ValueError(f"{path}: unrecognized header {header}")
    return RadialMetricProfile.from_samples(ambient, r, delta, label=str(path))
