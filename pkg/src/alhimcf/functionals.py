"""Integral quantities I, J, K, L, the inequality deficits, and trace audits."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from . import hypersurface as hs
from .hypersurface import GraphState

__all__ = [
    "Functionals",
    "InequalityReport",
    "InsufficientTrace",
    "functionals_of",
    "af_deficit",
    "af_deficit_from_L",
    "brendle_deficit",
    "int_rho_over_H",
    "monotonicity_report",
    "asymptotics_report",
    "fit_decay_exponent",
    "didt_identity_check",
    "reports_to_csv",
    "reports_table",
]


class InsufficientTrace(ValueError):
    """The trace is too short for the requested analysis."""


class Functionals(NamedTuple):
    I: float
    J: float
    K: float
    L: float
    a_hat: float


@dataclass
class InequalityReport:
    """Outcome of one check; ``worst_violation <= 0`` means it passed."""

    name: str
    worst_violation: float
    location: str
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.worst_violation <= 0.0)


def functionals_of(state: GraphState) -> Functionals:
    amb = state.ambient
    n, theta = amb.n, amb.theta
    g = state.geometry
    I = hs.integrate(state, g.lam_dot * g.H * g.dA)
    J = hs.integrate(state, hs.support_function(state) * g.dA)
    a_hat = hs.area(state) / theta
    K = theta * a_hat ** (n / (n - 1.0))
    L = (I - (n - 1) * K) / a_hat ** ((n - 2.0) / (n - 1.0))
    return Functionals(I, J, K, L, a_hat)


def af_deficit(state: GraphState) -> float:
    """``c_n I - (A^(n/(n-1)) + eps A^((n-2)/(n-1))) / 2`` (normalized area A)."""
    amb = state.ambient
    n, eps = amb.n, amb.epsilon
    f = functionals_of(state)
    bound = 0.5 * (f.a_hat ** (n / (n - 1.0)) + eps * f.a_hat ** ((n - 2.0) / (n - 1.0)))
    return amb.c_n * f.I - bound


def af_deficit_from_L(state: GraphState) -> float:
    """Same deficit, routed through ``L``."""
    amb = state.ambient
    n = amb.n
    f = functionals_of(state)
    return amb.c_n * (f.L - (n - 1) * amb.theta * amb.epsilon) * f.a_hat ** ((n - 2.0) / (n - 1.0))


def int_rho_over_H(state: GraphState) -> float:
    g = state.geometry
    if np.min(g.H) <= 0:
        raise ValueError("state is not strictly mean convex")
    return hs.integrate(state, g.lam_dot / g.H * g.dA)


def brendle_deficit(state: GraphState) -> float:
    """``(n-1) int lambda'/H - int p``; nonnegative, zero exactly on umbilic graphs."""
    n = state.ambient.n
    g = state.geometry
    if np.min(g.H) <= 0:
        raise ValueError("state is not strictly mean convex")
    # subtract pointwise before summing; both integrals grow like lambda^n
    return hs.integrate(state, (n - 1) * g.lam_dot / g.H * g.dA - g.lam ** n)


def didt_identity_check(state: GraphState, delta: float = 1e-4) -> float:
    """Residual of ``dI/dt = 2 int rho K / H + 2 J`` along the flow.

    ``dI/dt`` is a centred difference over ``u -/+ delta * W/H``; tangential
    reparametrisation does not change ``I``, so this is the flow derivative.
    The residual is reported relative to ``|dI/dt|``.
    """
    from .solver import rhs

    speed = rhs(state)
    I_plus = functionals_of(state.replace(u=state.u + delta * speed)).I
    I_minus = functionals_of(state.replace(u=state.u - delta * speed)).I
    dIdt = (I_plus - I_minus) / (2 * delta)
    g = state.geometry
    K = hs.extrinsic_scalar(state)
    rhs_val = 2 * hs.integrate(state, g.lam_dot * K / g.H * g.dA) + 2 * functionals_of(state).J
    return abs(dIdt - rhs_val) / abs(dIdt)


# --------------------------------------------------------------------------
# trace audits
# --------------------------------------------------------------------------


def _central(t, q):
    return (q[2:] - q[:-2]) / (t[2:] - t[:-2])


def _worst(excess, t_inner):
    k = int(np.argmax(excess))
    return float(excess[k]), f"t={t_inner[k]:.6g}"


def monotonicity_report(trace, dtheta: Optional[float] = None) -> List[InequalityReport]:
    """Finite-difference audit of the monotone and exact evolution laws.

    Checks ``d(jk_norm)/dt >= -tol``, ``dL/dt <= tol``, ``dA/dt = A`` and
    ``dJ/dt = n int rho/H`` at every interior record, with
    ``tol = 10 (record_dt^2 + dtheta^2) * scale`` and ``scale`` the largest
    magnitude of the audited quantity along the trace.  Quantities that vanish
    by cancellation (``L`` and ``jk_norm`` on slices) get a floor of ``1e-12``
    times the size of the cancelling terms, so rounding noise is not flagged.
    """
    t = np.asarray(trace["t"])
    if len(t) < 3:
        raise InsufficientTrace("monotonicity needs at least 3 records")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise InsufficientTrace("monotonicity needs uniformly spaced records")
    record_dt = float(dt[0])
    if dtheta is None:
        dtheta = trace.dtheta
    base = 10.0 * (record_dt**2 + dtheta**2)
    n = trace.ambient.n
    ti = t[1:-1]
    reports = []

    def scale_of(q, terms=None):
        out = float(np.max(np.abs(q)))
        if terms is not None:
            out = max(out, 1e-12 * float(np.max(np.abs(terms))))
        return out or 1.0

    a_hat = np.asarray(trace["anorm"])
    jk = np.asarray(trace["jk_norm"])
    tol = base * scale_of(jk, np.asarray(trace["J"]) / a_hat ** (n / (n - 1.0)))
    v, loc = _worst(-_central(t, jk) - tol, ti)
    reports.append(InequalityReport("jk_norm nondecreasing", v, loc, tol))

    L = np.asarray(trace["L"])
    tol = base * scale_of(L, np.asarray(trace["I"]) / a_hat ** ((n - 2.0) / (n - 1.0)))
    v, loc = _worst(_central(t, L) - tol, ti)
    reports.append(InequalityReport("L nonincreasing", v, loc, tol))

    A = np.asarray(trace["area"])
    tol = base * scale_of(A)
    v, loc = _worst(np.abs(_central(t, A) - A[1:-1]) - tol, ti)
    reports.append(InequalityReport("dA/dt = A", v, loc, tol))

    J = np.asarray(trace["J"])
    rho_over_H = (np.asarray(trace["brendle_deficit"]) + J) / (n - 1)
    tol = base * scale_of(J)
    v, loc = _worst(np.abs(_central(t, J) - n * rho_over_H[1:-1]) - tol, ti)
    reports.append(InequalityReport("dJ/dt = n int rho/H", v, loc, tol))
    return reports


def fit_decay_exponent(t, excess):
    """Fit ``excess ~ C t exp(-k t)``; returns ``(k, C, r_squared)``."""
    t = np.asarray(t, dtype=float)
    y = np.log(np.asarray(excess, dtype=float) / t)
    X = np.column_stack([np.ones_like(t), -t])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    pred = X @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[1]), float(np.exp(coef[0])), r2


def asymptotics_report(trace, ambient=None, tail_start: Optional[float] = None) -> List[InequalityReport]:
    """Late-time checks on a trace reaching ``t >= 10``.

    A finite trace cannot certify a liminf; the final record stands in for it.
    """
    ambient = ambient or trace.ambient
    n, eps, theta = ambient.n, ambient.epsilon, ambient.theta
    t = np.asarray(trace["t"])
    if len(t) < 3 or t[-1] < 10.0 - 1e-9:
        raise InsufficientTrace("asymptotics need a trace reaching t >= 10")
    reports = []
    J = np.asarray(trace["J"])
    a_hat = np.asarray(trace["anorm"])
    ratio = J[-1] / (theta * a_hat[-1] ** (n / (n - 1.0)))
    reports.append(InequalityReport("J/(theta A^(n/(n-1))) -> 1", abs(ratio - 1.0) - 0.01,
                                    f"t={t[-1]:.6g}", 0.01, f"ratio={ratio:.8g}"))
    L_final = float(trace["L"][-1])
    floor = (n - 1) * theta * eps
    note = f"L={L_final:.8g}; final record stands in for the liminf"
    reports.append(InequalityReport("liminf L >= (n-1) theta eps", floor - 1e-2 - L_final,
                                    f"t={t[-1]:.6g}", 1e-2, note))

    excess = np.asarray(trace["maxH"]) - (n - 1)
    if tail_start is None:
        tail_start = 0.5 * t[-1]
    sel = (t >= tail_start) & (t > 0)
    target = 2.0 / (n - 1)
    if np.all(excess[sel] > 0) and np.count_nonzero(sel) >= 3:
        k, C, r2 = fit_decay_exponent(t[sel], excess[sel])
        reports.append(InequalityReport("maxH-(n-1) decay exponent", abs(k - target) / target - 0.2,
                                        f"t>={tail_start:.6g}", 0.2,
                                        f"k={k:.6g}, C={C:.6g}, R2={r2:.6g}"))
    else:
        # slices sit exactly at H = n-1; nothing to fit
        worst = float(np.max(np.abs(excess[sel]))) if np.any(sel) else 0.0
        reports.append(InequalityReport("maxH-(n-1) decay exponent", worst - 1e-10,
                                        f"t>={tail_start:.6g}", 1e-10, "no positive excess to fit"))

    for col in ("max_grad_v", "w_range"):
        q = np.asarray(trace[col])
        if q[0] > 0:
            rel = q[-1] / q[0]
            reports.append(InequalityReport(f"{col} below 10% of initial", rel - 0.1,
                                            f"t={t[-1]:.6g}", 0.1, f"final/initial={rel:.6g}"))
        else:
            reports.append(InequalityReport(f"{col} below 10% of initial", float(q[-1]) - 1e-12,
                                            f"t={t[-1]:.6g}", 1e-12, "zero initial value"))
    return reports


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "worst_violation", "location", "tolerance"])
    for r in reports:
        w.writerow([r.name, repr(r.worst_violation), r.location, repr(r.tolerance)])
    return buf.getvalue()


def reports_table(reports) -> str:
    width = max([len(r.name) for r in reports] + [4])
    lines = [f"{'name':<{width}}  {'status':<6}  {'worst_violation':>16}  {'tolerance':>10}  location"]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        line = f"{r.name:<{width}}  {status:<6}  {r.worst_violation:>16.6e}  {r.tolerance:>10.3e}  {r.location}"
        if r.note:
            line += f"  ({r.note})"
        lines.append(line)
    return "\n".join(lines)
