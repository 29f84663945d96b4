"""Closed-form scalar functions of the locally hyperbolic stage.

The reference manifold is ``P_eps = I_eps x N`` with metric
``dr^2/rho(r)^2 + r^2 h`` where ``rho(r) = sqrt(r^2 + eps)``.  In the
arc-length coordinate ``s`` the metric reads ``ds^2 + lambda(s)^2 h`` with

    lambda(s) = e^s                 (eps = 0)
    lambda(s) = e^s / 4 + e^{-s}    (eps = -1)

Everything here accepts floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "AmbientModel",
    "DomainError",
    "lam",
    "lam_dot",
    "lam_ddot",
    "rho",
    "s_from_r",
    "r_from_s",
    "S_MIN_HYPERBOLIC",
]

#: lower end of the s-range for eps = -1 (r = 1)
S_MIN_HYPERBOLIC = math.log(2.0)


class DomainError(ValueError):
    """Argument outside the domain of a closed-form function."""


@dataclass(frozen=True)
class AmbientModel:
    """The warped product ``P_eps`` together with its cross-section data.

    Parameters
    ----------
    n : int
        Dimension of ``P_eps`` (the cross-section has dimension ``n - 1``).
    epsilon : int
        Curvature sign of the cross-section, ``0`` or ``-1``.
    theta : float, optional
        Area of the cross-section ``N``.  Defaults to ``(2 pi)^(n-1)`` for the
        flat 2 pi-torus (eps = 0) or ``4 pi (genus - 1)`` for a closed
        hyperbolic surface (n = 3, eps = -1).
    genus : int, optional
        Genus of the cross-section (n = 3 only).  ``genus = 1`` selects the
        normalization ``theta = 4 pi``.
    """

    n: int
    epsilon: int
    theta: Optional[float] = None
    genus: Optional[int] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n!r}")
        if self.epsilon not in (0, -1):
            raise ValueError(f"epsilon must be 0 or -1, got {self.epsilon!r}")
        if self.genus is not None:
            if self.n != 3:
                raise ValueError("genus is only meaningful for n = 3")
            if int(self.genus) != self.genus or self.genus < 1:
                raise ValueError(f"genus must be an integer >= 1, got {self.genus!r}")
            if self.genus >= 2 and self.epsilon != -1:
                raise ValueError("genus >= 2 requires epsilon = -1")
        theta = self.theta
        if theta is None:
            if self.genus is not None:
                theta = 4.0 * math.pi * (self.genus - 1) if self.genus >= 2 else 4.0 * math.pi
            elif self.epsilon == 0:
                theta = (2.0 * math.pi) ** (self.n - 1)
            else:
                raise ValueError("epsilon = -1 needs an explicit theta or a genus")
        if not theta > 0:
            raise ValueError(f"theta must be positive, got {theta!r}")
        object.__setattr__(self, "theta", float(theta))

    @property
    def c_n(self) -> float:
        """Normalizing constant ``1 / (2 (n-1) theta)`` of the mass integrals."""
        return 1.0 / (2.0 * (self.n - 1) * self.theta)

    @property
    def s_min(self) -> float:
        return S_MIN_HYPERBOLIC if self.epsilon == -1 else -math.inf


def _check_s(s, epsilon):
    if epsilon not in (0, -1):
        raise DomainError(f"epsilon must be 0 or -1, got {epsilon!r}")
    if epsilon == -1:
        # tiny slack so that s_from_r(1) round-trips
        if np.any(np.asarray(s) < S_MIN_HYPERBOLIC - 1e-15):
            raise DomainError("s must be >= log 2 when epsilon = -1")


def lam(s, epsilon):
    """Warping factor ``lambda_eps(s)``."""
    _check_s(s, epsilon)
    if epsilon == 0:
        return np.exp(s)
    return np.exp(s) / 4.0 + np.exp(-s)


def lam_dot(s, epsilon):
    """First derivative of the warping factor; equals the static potential."""
    _check_s(s, epsilon)
    if epsilon == 0:
        return np.exp(s)
    return np.exp(s) / 4.0 - np.exp(-s)


def lam_ddot(s, epsilon):
    """Second derivative of the warping factor (equal to ``lam``)."""
    return lam(s, epsilon)


def rho(r, epsilon):
    """Static potential ``sqrt(r^2 + eps)`` of the reference metric."""
    r = np.asarray(r, dtype=float)
    q = r * r + epsilon
    if np.any(q < 0) or (epsilon == 0 and np.any(r <= 0)):
        raise DomainError(f"rho undefined at r={r!r} for epsilon={epsilon}")
    out = np.sqrt(q)
    return out if out.ndim else float(out)


def s_from_r(r, epsilon):
    """Arc-length coordinate of the radius ``r``."""
    r = np.asarray(r, dtype=float)
    if epsilon == 0:
        if np.any(r <= 0):
            raise DomainError("r must be positive when epsilon = 0")
        out = np.log(r)
    elif epsilon == -1:
        if np.any(r < 1):
            raise DomainError("r must be >= 1 when epsilon = -1")
        out = np.log(2.0 * np.sqrt(r * r - 1.0) + 2.0 * r)
    else:
        raise DomainError(f"epsilon must be 0 or -1, got {epsilon!r}")
    return out if out.ndim else float(out)


def r_from_s(s, epsilon):
    """Inverse of :func:`s_from_r`; identical to :func:`lam`."""
    out = lam(s, epsilon)
    return out if np.ndim(out) else float(out)
