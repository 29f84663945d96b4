"""Discrete geometry of star-shaped radial graphs ``theta -> (u(theta), theta)``.

Two representations are supported:

* full grid: ``u`` sampled on the periodic grid ``[0, 2 pi)^(n-1)`` of the flat
  torus (eps = 0 only), derivatives by second-order central differences;
* symmetric: ``u`` is a single number and the graph is the slice ``{s = u}``;
  every quantity takes its closed slice form (any eps).

Array layout: a field on the grid has shape ``(M,) * (n-1)`` with axis ``i``
holding ``theta_{i+1}``.  Vector fields carry a leading axis of length
``n - 1``, tensor fields two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .warped import AmbientModel, S_MIN_HYPERBOLIC, lam, lam_dot

__all__ = [
    "CrossSectionGrid",
    "GraphState",
    "torus_graph",
    "v_derivatives",
    "w_factor",
    "mean_curvature",
    "shape_operator",
    "umbilicity",
    "support_function",
    "area_element",
    "area",
    "integrate",
    "laplace_beltrami",
    "minkowski_residual",
    "extrinsic_scalar",
    "field_to_csv",
    "field_from_csv",
]


@dataclass(frozen=True)
class CrossSectionGrid:
    """Uniform periodic grid on the flat torus ``[0, 2 pi)^dim``."""

    dim: int
    points_per_axis: int

    def __post_init__(self):
        M = self.points_per_axis
        if M < 8 or M % 2:
            raise ValueError(f"points_per_axis must be even and >= 8, got {M}")

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.points_per_axis

    @property
    def area(self) -> float:
        return (2.0 * math.pi) ** self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def coordinates(self) -> np.ndarray:
        """Angles as an array of shape ``(dim, M, ..., M)``."""
        t = self.spacing * np.arange(self.points_per_axis)
        return np.stack(np.meshgrid(*([t] * self.dim), indexing="ij"))


Field = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class GraphState:
    """A radial graph over the cross-section at flow time ``t``.

    ``u`` is the height in the arc-length coordinate ``s``.  A scalar ``u``
    selects the symmetric (slice) representation.
    """

    ambient: AmbientModel
    u: Field
    t: float = 0.0

    def __post_init__(self):
        u = self.u
        if np.ndim(u) == 0:
            u = float(u)
            if self.ambient.epsilon == -1 and not u > S_MIN_HYPERBOLIC:
                raise ValueError("eps = -1 slices need u > log 2")
        else:
            if self.ambient.epsilon != 0:
                raise ValueError("full-grid graphs are only supported for eps = 0")
            u = np.array(u, dtype=float)
            d = self.ambient.n - 1
            if u.ndim != d or len(set(u.shape)) != 1:
                raise ValueError(f"u must have shape (M,)*{d}, got {u.shape}")
            CrossSectionGrid(d, u.shape[0])
            if not np.all(np.isfinite(u)):
                raise ValueError("u contains non-finite values")
            u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t", float(self.t))

    @property
    def symmetric(self) -> bool:
        return np.ndim(self.u) == 0

    @property
    def grid(self) -> Optional[CrossSectionGrid]:
        if self.symmetric:
            return None
        return CrossSectionGrid(self.ambient.n - 1, self.u.shape[0])

    def replace(self, u=None, t=None) -> "GraphState":
        return GraphState(self.ambient, self.u if u is None else u, self.t if t is None else t)

    @cached_property
    def geometry(self) -> "_Geometry":
        return _Geometry(self)


def torus_graph(
    ambient: AmbientModel,
    M: int,
    s0: float,
    modes: Iterable[Tuple[Sequence[int], float, float]] = (),
    t: float = 0.0,
) -> GraphState:
    """Graph ``u = s0 + sum a cos(k.theta) + b sin(k.theta)`` on an ``M``-grid."""
    grid = CrossSectionGrid(ambient.n - 1, M)
    theta = grid.coordinates()
    u = np.full(theta.shape[1:], float(s0))
    for k, a_cos, a_sin in modes:
        k = np.asarray(k, dtype=float)
        if k.shape != (grid.dim,):
            raise ValueError(f"wave vector needs {grid.dim} entries, got {tuple(k)}")
        phase = np.tensordot(k, theta, axes=1)
        u = u + a_cos * np.cos(phase) + a_sin * np.sin(phase)
    return GraphState(ambient, u, t)


def _fwd(f, axis):
    return np.roll(f, -1, axis=axis)


def _bwd(f, axis):
    return np.roll(f, 1, axis=axis)


class _Geometry:
    """All pointwise quantities of a state, computed once."""

    def __init__(self, state: GraphState):
        # overflow becomes inf here; the solver turns it into NumericalOverflow
        with np.errstate(over="ignore"):
            self._build(state)

    def _build(self, state: GraphState):
        self.state = state
        amb = state.ambient
        n, eps = amb.n, amb.epsilon
        self.n = n
        u = state.u
        self.lam = lam(u, eps)
        self.lam_dot = lam_dot(u, eps)
        if state.symmetric:
            self.W = 1.0
            self.H = (n - 1) * self.lam_dot / self.lam
            self.dA = self.lam ** (n - 1)
            return
        d = n - 1
        h = state.grid.spacing
        du = np.stack([(_fwd(u, i) - _bwd(u, i)) / (2 * h) for i in range(d)])
        d2u = np.empty((d, d) + u.shape)
        for i in range(d):
            d2u[i, i] = (_fwd(u, i) - 2 * u + _bwd(u, i)) / (h * h)
            for j in range(i + 1, d):
                pp = _fwd(_fwd(u, i), j)
                pm = _bwd(_fwd(u, i), j)
                mp = _fwd(_bwd(u, i), j)
                mm = _bwd(_bwd(u, i), j)
                d2u[i, j] = d2u[j, i] = (pp - pm - mp + mm) / (4 * h * h)
        L, Ld = self.lam, self.lam_dot
        self.v_i = du / L
        self.v_ij = d2u / L - Ld * np.einsum("i...,j...->ij...", du, du) / L**2
        self.grad_v2 = np.sum(self.v_i**2, axis=0)
        self.W = np.sqrt(1.0 + self.grad_v2)
        eye = np.eye(d).reshape((d, d) + (1,) * d)
        self.h_tilde = eye - np.einsum("i...,j...->ij...", self.v_i, self.v_i) / self.W**2
        B = np.einsum("ik...,kj...->ij...", self.h_tilde, self.v_ij)
        WL = self.W * L
        self.a = eye * (Ld / WL) - B / WL
        self.H = (n - 1) * Ld / WL - np.einsum("ii...->...", B) / WL
        self.dA = L ** (n - 1) * self.W

    @cached_property
    def trace_a(self):
        return np.einsum("ii...->...", self.a)

    @cached_property
    def norm_a2(self):
        if self.state.symmetric:
            return (self.n - 1) * (self.lam_dot / self.lam) ** 2
        return np.einsum("ij...,ji...->...", self.a, self.a)


def _require_grid(state: GraphState, what: str):
    if state.symmetric:
        raise ValueError(f"{what} needs a full-grid state")


def v_derivatives(state: GraphState) -> Tuple[np.ndarray, np.ndarray]:
    """First and second derivatives of ``v = phi(u)``, ``phi' = 1/lambda``."""
    _require_grid(state, "v_derivatives")
    g = state.geometry
    return g.v_i, g.v_ij


def w_factor(state: GraphState) -> Field:
    """``W = sqrt(1 + |Dv|^2)``."""
    return state.geometry.W


def mean_curvature(state: GraphState) -> Field:
    """Mean curvature with respect to the inward normal."""
    return state.geometry.H


def shape_operator(state: GraphState) -> np.ndarray:
    """Mixed shape operator ``a^i_j`` as an array of shape ``(d, d, M, ...)``."""
    _require_grid(state, "shape_operator")
    return state.geometry.a


def umbilicity(state: GraphState) -> Field:
    """Pointwise ``|a - H/(n-1) Id|`` in the induced metric."""
    g = state.geometry
    if state.symmetric:
        return 0.0
    dev = g.norm_a2 - g.H**2 / (g.n - 1)
    return np.sqrt(np.maximum(dev, 0.0))


def support_function(state: GraphState) -> Field:
    """``p = lambda(u) / W``."""
    g = state.geometry
    return g.lam / g.W


def area_element(state: GraphState) -> Field:
    """Density ``lambda^(n-1) W`` of the area form per unit cross-section volume."""
    return state.geometry.dA


def integrate(state: GraphState, density: Field) -> float:
    """Integral over the cross-section (plain periodic sum)."""
    if state.symmetric:
        return float(state.ambient.theta * density)
    return float(np.sum(density) * state.grid.cell_volume)


def _spectral_gradient(u: np.ndarray) -> np.ndarray:
    """Gradient of a periodic grid function by FFT (Nyquist mode dropped)."""
    M = u.shape[0]
    k = np.fft.fftfreq(M, d=1.0 / M)
    k[M // 2] = 0.0
    U = np.fft.fftn(u)
    out = []
    for axis in range(u.ndim):
        shape = [1] * u.ndim
        shape[axis] = M
        out.append(np.real(np.fft.ifftn(1j * k.reshape(shape) * U)))
    return np.stack(out)


def area(state: GraphState) -> float:
    """Total area.

    On the grid the slope entering ``W`` is differentiated spectrally, so the
    periodic sum converges faster than any power of the spacing.
    """
    if state.symmetric:
        return integrate(state, area_element(state))
    g = state.geometry
    du = _spectral_gradient(state.u)
    W = np.sqrt(1.0 + np.sum(du**2, axis=0) / g.lam**2)
    return integrate(state, g.lam ** (g.n - 1) * W)


def laplace_beltrami(state: GraphState, f: np.ndarray) -> np.ndarray:
    """Laplace-Beltrami operator of the graph in divergence form.

    With ``A^{ij} = sqrt(det eta) eta^{ij}`` the operator is
    ``(1/sqrt(det eta)) d_i (A^{ij} d_j f)``.  Diagonal fluxes live on cell
    faces with averaged coefficients; mixed fluxes live on cell corners.  The
    resulting matrix is symmetric for the weighted inner product
    ``sum f g dSigma``, and annihilates constants.
    """
    _require_grid(state, "laplace_beltrami")
    g = state.geometry
    n, d = g.n, g.n - 1
    h = state.grid.spacing
    f = np.asarray(f, dtype=float)
    sqrt_eta = g.dA
    A = g.lam ** (n - 3) * g.W * g.h_tilde
    out = np.zeros_like(f)
    for i in range(d):
        c = 0.5 * (A[i, i] + _fwd(A[i, i], i))
        F = c * (_fwd(f, i) - f) / h
        out += (F - _bwd(F, i)) / h
        for j in range(i + 1, d):
            f10, f01 = _fwd(f, i), _fwd(f, j)
            f11 = _fwd(f10, j)
            Gi = ((f10 - f) + (f11 - f01)) / (2 * h)
            Gj = ((f01 - f) + (f11 - f10)) / (2 * h)
            Aij = A[i, j]
            c = 0.25 * (Aij + _fwd(Aij, i) + _fwd(Aij, j) + _fwd(_fwd(Aij, i), j))
            Pi, Pj = c * Gj, c * Gi
            # adjoints of the corner gradients, mapped back to the nodes
            GiT = (-Pi + _bwd(Pi, i) - _bwd(Pi, j) + _bwd(_bwd(Pi, i), j)) / (2 * h)
            GjT = (-Pj + _bwd(Pj, j) - _bwd(Pj, i) + _bwd(_bwd(Pj, i), j)) / (2 * h)
            out -= GiT + GjT
    return out / sqrt_eta


def minkowski_residual(state: GraphState) -> float:
    """Max of ``|Lap rho - (n-1) rho + H p|`` with ``rho = lambda'(u)``."""
    _require_grid(state, "minkowski_residual")
    g = state.geometry
    rho = g.lam_dot
    res = laplace_beltrami(state, rho) - (g.n - 1) * rho + g.H * support_function(state)
    return float(np.max(np.abs(res)))


def extrinsic_scalar(state: GraphState) -> Field:
    """Second elementary symmetric function of the principal curvatures."""
    g = state.geometry
    return 0.5 * (g.H**2 - g.norm_a2)


def field_to_csv(path, field: np.ndarray) -> None:
    """Write a grid field as a CSV matrix, theta_1 varying fastest."""
    field = np.asarray(field)
    M = field.shape[0]
    np.savetxt(path, field.ravel(order="F").reshape(-1, M), delimiter=",", fmt="%.17g")


def field_from_csv(path, dim: int) -> np.ndarray:
    rows = np.loadtxt(path, delimiter=",", ndmin=2)
    M = rows.shape[1]
    return rows.ravel().reshape((M,) * dim, order="F")
