"""Inverse mean curvature flow of radial graphs, ``du/dt = W/H``.

Explicit classical RK4 with a parabolic time-step limit.  In rescaled mode
the stored height is ``u - t/(n-1)``; geometry is always evaluated at the
true height.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import functionals as fn
from . import hypersurface as hs
from .hypersurface import GraphState
from .warped import AmbientModel

__all__ = [
    "FlowConfig",
    "FlowTrace",
    "NonMeanConvex",
    "NumericalOverflow",
    "TRACE_COLUMNS",
    "rhs",
    "stable_dt",
    "step",
    "run",
    "record",
]

TRACE_COLUMNS = (
    "t", "area", "anorm", "I", "J", "K", "L", "jk_norm", "af_deficit",
    "brendle_deficit", "minH", "maxH", "mean_WH", "max_grad_v",
    "max_umbilicity", "minkowski_resid", "w_range",
)


class NonMeanConvex(RuntimeError):
    """Mean curvature dropped below the guard; the flow speed is undefined."""

    def __init__(self, msg, t=None):
        super().__init__(msg)
        self.t = t


class NumericalOverflow(RuntimeError):
    def __init__(self, msg, t=None):
        super().__init__(msg)
        self.t = t


@dataclass(frozen=True)
class FlowConfig:
    t_end: float
    record_dt: float
    safety: float = 0.4
    rescale: Optional[bool] = None
    min_H: float = 1e-8
    # symmetric states have no grid; this caps their step for accuracy
    max_dt: float = 0.01

    def __post_init__(self):
        if not 0 < self.safety <= 1:
            raise ValueError("safety must lie in (0, 1]")
        if not self.t_end > 0 or not self.record_dt > 0:
            raise ValueError("t_end and record_dt must be positive")
        if self.record_dt > self.t_end:
            raise ValueError("record_dt must not exceed t_end")
        if self.rescale is None:
            object.__setattr__(self, "rescale", self.t_end > 15)


def _check_mean_convex(state: GraphState, min_H: float):
    H = hs.mean_curvature(state)
    if not np.all(np.isfinite(H)):
        raise NumericalOverflow(f"non-finite mean curvature at t={state.t:.6g}", state.t)
    if np.min(H) <= min_H:
        raise NonMeanConvex(f"min H = {np.min(H):.3e} at t={state.t:.6g}", state.t)
    return H


def rhs(state: GraphState, min_H: float = 1e-8):
    """Normal speed ``W/H`` of the graph function."""
    H = _check_mean_convex(state, min_H)
    return hs.w_factor(state) / H


def stable_dt(state: GraphState, safety: float = 0.4, min_H: float = 1e-8) -> float:
    """``safety * dtheta^2 * min(lambda^2 H^2) / (2 (n-1))``; infinite for slices."""
    H = _check_mean_convex(state, min_H)
    if state.symmetric:
        return math.inf
    n = state.ambient.n
    lam = state.geometry.lam
    h = state.grid.spacing
    return float(safety * h * h * np.min(lam * lam * H * H) / (2.0 * (n - 1)))


class _Stepper:
    """RK4 in either the true or the rescaled height."""

    def __init__(self, ambient: AmbientModel, rescale: bool, min_H: float):
        self.ambient = ambient
        self.rescale = rescale
        self.drift = 1.0 / (ambient.n - 1)
        self.min_H = min_H

    def true_state(self, y, t) -> GraphState:
        u = y + self.drift * t if self.rescale else y
        return GraphState(self.ambient, u, t)

    def f(self, y, t):
        s = self.true_state(y, t)
        lam = s.geometry.lam
        if not np.all(np.isfinite(lam)):
            raise NumericalOverflow(f"lambda(u) overflowed at t={t:.6g}", t)
        v = rhs(s, self.min_H)
        return v - self.drift if self.rescale else v

    def advance(self, y, t, dt):
        k1 = self.f(y, t)
        k2 = self.f(y + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = self.f(y + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = self.f(y + dt * k3, t + dt)
        return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def step(state: GraphState, dt: float, rescale: bool = False, min_H: float = 1e-8) -> GraphState:
    """One RK4 step of size ``dt``; returns the new state at ``t + dt``."""
    st = _Stepper(state.ambient, rescale, min_H)
    y = state.u - st.drift * state.t if rescale else state.u
    y_new = st.advance(y, state.t, dt)
    return st.true_state(y_new, state.t + dt)


def record(state: GraphState) -> Dict[str, float]:
    """One trace row for ``state``."""
    n = state.ambient.n
    g = state.geometry
    f = fn.functionals_of(state)
    H = np.asarray(g.H)
    W = np.asarray(g.W)
    tilde = np.asarray(state.u) - state.t / (n - 1)
    w = np.exp(tilde) + math.exp(-state.t / (n - 1))
    row = {
        "t": state.t,
        "area": hs.area(state),
        "anorm": f.a_hat,
        "I": f.I,
        "J": f.J,
        "K": f.K,
        "L": f.L,
        "jk_norm": (f.J - f.K) / f.a_hat ** (n / (n - 1.0)),
        "af_deficit": fn.af_deficit(state),
        "brendle_deficit": fn.brendle_deficit(state),
        "minH": float(np.min(H)),
        "maxH": float(np.max(H)),
        "mean_WH": float(np.mean(W / H)),
        "max_grad_v": 0.0 if state.symmetric else float(np.sqrt(np.max(g.grad_v2))),
        "max_umbilicity": float(np.max(hs.umbilicity(state))),
        "minkowski_resid": 0.0 if state.symmetric else hs.minkowski_residual(state),
        "w_range": float(np.max(w) - np.min(w)),
    }
    return row


class FlowTrace:
    """Time series of trace rows, with the state that produced the last one."""

    def __init__(self, ambient: AmbientModel, dtheta: float = 0.0, config: Optional[FlowConfig] = None):
        self.ambient = ambient
        self.dtheta = dtheta
        self.config = config
        self.rows: List[Dict[str, float]] = []
        self.final_state: Optional[GraphState] = None
        self.mean_tilde_u: List[float] = []

    def append(self, row):
        if self.rows and not row["t"] > self.rows[-1]["t"]:
            raise ValueError("trace times must increase strictly")
        self.rows.append(row)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, col) -> np.ndarray:
        return np.array([r[col] for r in self.rows])

    def to_csv(self, path, comment: Optional[str] = None) -> None:
        with open(path, "w", newline="") as fh:
            if comment:
                for line in comment.splitlines():
                    fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_COLUMNS)
            for r in self.rows:
                w.writerow([repr(float(r[c])) for c in TRACE_COLUMNS])

    @classmethod
    def from_csv(cls, path, ambient: AmbientModel, dtheta: float = 0.0) -> "FlowTrace":
        tr = cls(ambient, dtheta)
        with open(path) as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
        reader = csv.DictReader(lines)
        if tuple(reader.fieldnames or ()) != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header {reader.fieldnames}")
        for r in reader:
            tr.append({k: float(v) for k, v in r.items()})
        return tr


def run(state0: GraphState, config: FlowConfig) -> FlowTrace:
    """Integrate the flow from ``state0`` to ``config.t_end``.

    The step is ``min(stable_dt, time to next record)`` (and ``max_dt`` for
    symmetric states), so records land exactly on multiples of ``record_dt``.
    """
    amb = state0.ambient
    n = amb.n
    dtheta = 0.0 if state0.symmetric else state0.grid.spacing
    trace = FlowTrace(amb, dtheta, config)
    st = _Stepper(amb, bool(config.rescale), config.min_H)
    t = state0.t
    y = state0.u - st.drift * t if st.rescale else state0.u
    state = state0
    _check_mean_convex(state, config.min_H)
    trace.append(record(state))
    trace.mean_tilde_u.append(float(np.mean(state.u)) - t / (n - 1))
    n_records = int(round(config.t_end / config.record_dt))
    for k in range(1, n_records + 1):
        t_rec = state0.t + k * config.record_dt
        while t < t_rec:
            dt = stable_dt(state, config.safety, config.min_H)
            if state.symmetric:
                dt = min(dt, config.max_dt)
            if t + dt >= t_rec - 1e-12 * max(1.0, abs(t_rec)):
                dt = t_rec - t
                y = st.advance(y, t, dt)
                t = t_rec
            else:
                y = st.advance(y, t, dt)
                t = t + dt
            state = st.true_state(y, t)
            if not np.all(np.isfinite(np.asarray(state.geometry.dA))):
                raise NumericalOverflow(f"area element overflowed at t={t:.6g}", t)
        trace.append(record(state))
        trace.mean_tilde_u.append(float(np.mean(state.u)) - t / (n - 1))
    trace.final_state = state
    return trace
