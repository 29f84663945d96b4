"""Inverse mean curvature flow and Penrose-type bounds in locally hyperbolic warped products."""

from .warped import AmbientModel, DomainError, lam, lam_dot, lam_ddot, rho, r_from_s, s_from_r
from .kottler import (
    KottlerParams,
    InvalidParameter,
    critical_mass,
    embedding_profile,
    f_eval,
    haw_bound,
    horizon_radius,
    kottler_boundary_mass,
    mass_from_area,
    penrose_bound,
    rho_m,
    sectional_curvatures,
)
from .hypersurface import CrossSectionGrid, GraphState, torus_graph
from .functionals import (
    InequalityReport,
    af_deficit,
    asymptotics_report,
    brendle_deficit,
    didt_identity_check,
    functionals_of,
    monotonicity_report,
)
from .solver import FlowConfig, FlowTrace, NonMeanConvex, NumericalOverflow, run, step, stable_dt

__version__ = "0.1.0"
