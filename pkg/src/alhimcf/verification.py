"""Verification suites behind ``alhimcf verify``.

Each suite returns a list of :class:`InequalityReport`; a suite passes when
every report does.  The standard perturbed run is shared between the
monotonicity and asymptotics suites.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Dict, List

import numpy as np

from . import functionals as fn
from . import hypersurface as hs
from . import kottler as kt
from . import mass as ms
from .functionals import InequalityReport
from .hypersurface import GraphState, torus_graph
from .solver import FlowConfig, run
from .warped import AmbientModel, lam, s_from_r

__all__ = ["SUITES", "run_suite", "standard_run", "standard_initial_state", "random_torus_graph",
           "slice_family", "kottler_cases"]

STANDARD_MODES = [((1, 0), 0.1, 0.0), ((0, 1), 0.05, 0.0)]


def standard_initial_state(M: int = 64) -> GraphState:
    return torus_graph(AmbientModel(3, 0), M, 1.0, STANDARD_MODES)


@lru_cache(maxsize=2)
def standard_run(t_end: float = 12.0, record_dt: float = 0.1):
    return run(standard_initial_state(), FlowConfig(t_end=t_end, record_dt=record_dt))


def _ambient(n, eps):
    if eps == 0:
        return AmbientModel(n, 0)
    if n == 3:
        return AmbientModel(3, -1, genus=2)
    return AmbientModel(n, -1, theta=4.0 * math.pi)


def slice_family(count: int = 20, seed: int = 0):
    """Slices spread over n in {3,4,5}, eps in {-1,0}, radii in [1.2, 3]."""
    rng = np.random.default_rng(seed)
    combos = [(n, e) for n in (3, 4, 5) for e in (-1, 0)]
    out = []
    for k in range(count):
        n, e = combos[k % len(combos)]
        r = rng.uniform(1.2, 3.0)
        out.append(GraphState(_ambient(n, e), s_from_r(r, e)))
    return out


def kottler_cases():
    return [
        kt.KottlerParams(AmbientModel(3, 0), 4.0),
        kt.KottlerParams(AmbientModel(3, -1, genus=2), 3.0),
        kt.KottlerParams(AmbientModel(4, -1, theta=4.0 * math.pi), 6.0),
    ]


def random_torus_graph(rng, M: int = 64, max_amp: float = 0.2, max_modes: int = 3) -> GraphState:
    """Random strictly mean convex graph on the 2-torus (n = 3, eps = 0)."""
    amb = AmbientModel(3, 0)
    while True:
        s0 = rng.uniform(0.3, 1.5)
        modes = []
        for _ in range(rng.integers(1, max_modes + 1)):
            k = tuple(int(x) for x in rng.integers(-2, 3, size=2))
            if k == (0, 0):
                k = (1, 0)
            modes.append((k, rng.uniform(-max_amp, max_amp), rng.uniform(-max_amp, max_amp)))
        state = torus_graph(amb, M, s0, modes)
        if np.min(hs.mean_curvature(state)) > 1e-3:
            return state


def _max_report(name, values, tol, locations=None, note=""):
    values = np.asarray(values, dtype=float)
    k = int(np.argmax(values))
    loc = locations[k] if locations is not None else f"case {k}"
    return InequalityReport(name, float(values[k] - tol), loc, tol, note)


def suite_slices() -> List[InequalityReport]:
    reps = []
    slices = slice_family()
    labels = [f"n={s.ambient.n} eps={s.ambient.epsilon} u={s.u:.4f}" for s in slices]
    reps.append(_max_report("slice af_deficit = 0", [abs(fn.af_deficit(s)) for s in slices], 1e-10, labels))
    reps.append(_max_report("slice brendle_deficit = 0", [abs(fn.brendle_deficit(s)) for s in slices], 1e-10, labels))
    reps.append(_max_report(
        "slice L = (n-1) theta eps",
        [abs(fn.functionals_of(s).L - (s.ambient.n - 1) * s.ambient.theta * s.ambient.epsilon) for s in slices],
        1e-10, labels))
    area_err, lam_err, labels6 = [], [], []
    for eps in (-1, 0):
        amb = _ambient(3, eps)
        s0 = GraphState(amb, s_from_r(2.0, eps))
        tr = run(s0, FlowConfig(t_end=2.0, record_dt=0.1))
        t, A = tr["t"], tr["area"]
        area_err.append(float(np.max(np.abs(A * np.exp(-t) / A[0] - 1.0))))
        worst = 0.0
        for t_k in (0.5, 1.0, 1.5, 2.0):
            u_k = run(s0, FlowConfig(t_end=t_k, record_dt=t_k)).final_state.u
            worst = max(worst, abs(lam(u_k, eps) / (lam(s0.u, eps) * math.exp(t_k / 2.0)) - 1.0))
        lam_err.append(worst)
        labels6.append(f"eps={eps}")
    reps.append(_max_report("slice flow area = A0 e^t", area_err, 1e-8, labels6))
    reps.append(_max_report("slice flow lambda = lambda0 e^(t/(n-1))", lam_err, 1e-10, labels6))
    errs, labels11 = [], []
    for genus in (2, 3, 4):
        amb = AmbientModel(3, -1, genus=genus)
        for area in np.linspace(0.5, 20.0, 20) * amb.theta:
            errs.append(abs(kt.haw_bound(area, genus) - kt.mass_from_area(area, amb)))
            labels11.append(f"genus={genus} area={area:.4g}")
    amb1 = AmbientModel(3, 0, theta=4.0 * math.pi)
    for area in np.linspace(0.5, 20.0, 20) * amb1.theta:
        errs.append(abs(kt.haw_bound(area, 1) - kt.mass_from_area(area, amb1)))
        labels11.append(f"genus=1 area={area:.4g}")
    reps.append(_max_report("genus bound = Penrose bound", errs, 1e-12, labels11))
    return reps


def suite_mass() -> List[InequalityReport]:
    reps = []
    rng = np.random.default_rng(1)
    errs_area, errs_bdry, labels = [], [], []
    for k in range(50):
        n, eps = [(3, 0), (3, -1), (4, 0), (4, -1), (5, 0), (5, -1)][k % 6]
        amb = _ambient(n, eps)
        m = float(rng.uniform(0.0, 100.0)) or 1.0
        p = kt.KottlerParams(amb, m)
        r_h = kt.horizon_radius(p)
        errs_area.append(abs(kt.mass_from_area(amb.theta * r_h ** (n - 1), amb) - m) / max(1.0, m))
        errs_bdry.append(abs(kt.kottler_boundary_mass(p) - m) / max(1.0, m))
        labels.append(f"n={n} eps={eps} m={m:.6g}")
    reps.append(_max_report("mass_from_area(horizon) = m", errs_area, 1e-10, labels))
    reps.append(_max_report("boundary mass = m", errs_bdry, 1e-10, labels))
    errs, labels = [], []
    for n in (3, 4, 5):
        for eps in (-1, 0):
            p = kt.KottlerParams(_ambient(n, eps), 2.5)
            R = ms.scalar_curvature_symmetric(ms.RadialMetricProfile.kottler(p))
            r = np.linspace(kt.horizon_radius(p) * 1.01, 100.0, 50)
            errs.append(float(np.max(np.abs(R(r) + n * (n - 1)))))
            labels.append(f"n={n} eps={eps}")
    reps.append(_max_report("Kottler scalar curvature = -n(n-1)", errs, 1e-10, labels))
    flux_err, emb_err, th_err, labels = [], [], [], []
    for p in kottler_cases():
        prof = ms.RadialMetricProfile.kottler(p)
        flux_err.append(abs(ms.flux_mass_limit(prof, (10.0, 100.0, 1000.0)) - p.m) / p.m)
        r_h = kt.horizon_radius(p)
        table = kt.embedding_profile(p, 50.0, 1e-3)
        sel = table[:, 0] >= r_h + 1e-3 * (1 - 1e-9)
        emb_err.append(kt.induced_metric_residual(table[sel], p))
        th = ms.theta_graph(p.ambient, table[sel, 0], table[sel, 2])
        th_err.append(float(np.max(np.abs(th - kt.rho_m(table[sel, 0], p)))))
        labels.append(f"n={p.n} eps={p.epsilon} m={p.m:g}")
    reps.append(_max_report("flux mass extrapolates to m (relative)", flux_err, 1e-3, labels))
    reps.append(_max_report("embedding induced-metric residual", emb_err, 1e-9, labels))
    reps.append(_max_report("Theta on Kottler graph = rho_m", th_err, 1e-8, labels))
    return reps


def suite_geometry() -> List[InequalityReport]:
    reps = []
    amb = AmbientModel(3, 0)
    modes = [((1, 0), 0.15, 0.0), ((1, 1), 0.0, 0.1)]
    res = [hs.minkowski_residual(torus_graph(amb, M, 1.0, modes)) for M in (32, 64, 128)]
    orders = [math.log2(res[0] / res[1]), math.log2(res[1] / res[2])]
    reps.append(InequalityReport("Minkowski residual order >= 1.8", 1.8 - min(orders), "M=32,64,128", 0.0,
                                 f"orders={orders[0]:.3f},{orders[1]:.3f}"))
    didt = fn.didt_identity_check(standard_initial_state(64), 1e-4)
    reps.append(InequalityReport("dI/dt identity residual", didt - 1e-4, "standard state, M=64", 1e-4))
    rng = np.random.default_rng(7)
    states = [random_torus_graph(rng) for _ in range(100)]
    reps.append(_max_report("af_deficit >= 0 (random graphs)", [-fn.af_deficit(s) for s in states], 1e-8))
    reps.append(_max_report("brendle_deficit >= 0 (random graphs)", [-fn.brendle_deficit(s) for s in states], 1e-8))
    return reps


def suite_monotonicity() -> List[InequalityReport]:
    tr = standard_run()
    reps = [r for r in fn.monotonicity_report(tr) if r.name in ("jk_norm nondecreasing", "L nonincreasing")]
    jk = tr["J"] - tr["K"]
    k = int(np.argmax(jk))
    reps.append(InequalityReport("J - K <= 0", float(jk[k] - 1e-8), f"t={tr['t'][k]:.6g}", 1e-8))
    return reps


def suite_asymptotics() -> List[InequalityReport]:
    return fn.asymptotics_report(standard_run())


SUITES: Dict[str, Callable[[], List[InequalityReport]]] = {
    "slices": suite_slices,
    "geometry": suite_geometry,
    "monotonicity": suite_monotonicity,
    "asymptotics": suite_asymptotics,
    "mass": suite_mass,
}


def run_suite(name: str) -> List[InequalityReport]:
    if name == "all":
        out = []
        for key in sorted(SUITES):
            out.extend(SUITES[key]())
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
