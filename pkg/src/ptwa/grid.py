"""Finite-difference representation of functions of (theta, kappa).

Used to *verify* the spectral solver and the closed-form equilibria, never as
the primary solver: the collision operator Q and the invariant-defining
operator L are discretized with second-order centered differences (periodic in
theta, truncated in kappa) and applied to sampled fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import ModelParams

__all__ = [
    "Grid2D",
    "GridField",
    "eval_H",
    "flux_direction",
    "apply_Q",
    "apply_L",
    "residual_inf",
    "dissipation",
]

#: isotropy tolerance for the flux, relative to total mass
FLUX_TOL = 1e-12


@dataclass(frozen=True)
class Grid2D:
    """Periodic x truncated grid: theta in [-pi, pi) with n_theta nodes, kappa on [kappa_min, kappa_max]."""

    n_theta: int
    kappa_min: float
    kappa_max: float
    n_kappa: int

    def __post_init__(self):
        if self.n_theta < 8 or self.n_kappa < 8:
            raise ValueError("grid too coarse: need n_theta >= 8 and n_kappa >= 8")
        if not self.kappa_min < self.kappa_max:
            raise ValueError("kappa_min must be < kappa_max")

    @property
    def d_theta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def d_kappa(self) -> float:
        return (self.kappa_max - self.kappa_min) / (self.n_kappa - 1)

    @property
    def theta(self) -> np.ndarray:
        return -math.pi + self.d_theta * np.arange(self.n_theta)

    @property
    def kappa(self) -> np.ndarray:
        return np.linspace(self.kappa_min, self.kappa_max, self.n_kappa)

    def meshgrid(self):
        """(theta, kappa) arrays of shape (n_theta, n_kappa)."""
        return np.meshgrid(self.theta, self.kappa, indexing="ij")

    def interior_mask(self) -> np.ndarray:
        """True away from the kappa boundary layer (one row each side; theta is periodic)."""
        mask = np.ones((self.n_theta, self.n_kappa), dtype=bool)
        mask[:, 0] = False
        mask[:, -1] = False
        return mask


@dataclass(frozen=True)
class GridField:
    """Real samples of a function of (theta, kappa), shape (n_theta, n_kappa)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_theta, self.grid.n_kappa):
            raise ValueError(f"values shape {v.shape} does not match grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, grid: Grid2D, fn) -> "GridField":
        th, ka = grid.meshgrid()
        return cls(grid, fn(th, ka))

    def to_csv(self, path) -> None:
        """Columns theta, kappa, value; row-major in theta."""
        th, ka = self.grid.meshgrid()
        data = np.column_stack([th.ravel(), ka.ravel(), self.values.ravel()])
        np.savetxt(path, data, delimiter=",", header="theta,kappa,value", comments="", fmt="%.17g")

    def quad_weights(self) -> np.ndarray:
        """Trapezoid quadrature weights (periodic in theta, trapezoid in kappa)."""
        wk = np.full(self.grid.n_kappa, self.grid.d_kappa)
        wk[0] *= 0.5
        wk[-1] *= 0.5
        return self.grid.d_theta * wk[None, :]

    def integrate(self, integrand: np.ndarray | None = None) -> float:
        v = self.values if integrand is None else integrand
        return float(np.sum(v * self.quad_weights()))


def eval_H(params: ModelParams, theta, kappa):
    """Hamiltonian of the skew-adjoint part: H(theta, kappa) = -lam cos(theta) + kappa^2/2."""
    return -params.lam * np.cos(theta) + np.asarray(kappa) ** 2 / 2.0


def flux_direction(f: GridField):
    """Direction of the angular flux j = integral tau(theta) f dtheta dkappa, or None if isotropic."""
    th, _ = f.grid.meshgrid()
    w = f.quad_weights()
    jx = float(np.sum(np.cos(th) * f.values * w))
    jy = float(np.sum(np.sin(th) * f.values * w))
    mass = abs(f.integrate())
    if math.hypot(jx, jy) <= FLUX_TOL * max(mass, 1e-300):
        return None
    return math.atan2(jy, jx)


def _d_theta(values: np.ndarray, dth: float) -> np.ndarray:
    """Centered periodic derivative along axis 0."""
    return (np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0)) / (2.0 * dth)


def _d_kappa(values: np.ndarray, dk: float) -> np.ndarray:
    """Centered derivative along axis 1; one-sided first-order at the kappa boundary rows."""
    out = np.empty_like(values)
    out[:, 1:-1] = (values[:, 2:] - values[:, :-2]) / (2.0 * dk)
    out[:, 0] = (values[:, 1] - values[:, 0]) / dk
    out[:, -1] = (values[:, -1] - values[:, -2]) / dk
    return out


def _d2_kappa(values: np.ndarray, dk: float) -> np.ndarray:
    """Centered second derivative along axis 1; shifted stencil at the boundary rows."""
    out = np.empty_like(values)
    out[:, 1:-1] = (values[:, 2:] - 2.0 * values[:, 1:-1] + values[:, :-2]) / dk**2
    out[:, 0] = (values[:, 2] - 2.0 * values[:, 1] + values[:, 0]) / dk**2
    out[:, -1] = (values[:, -1] - 2.0 * values[:, -2] + values[:, -3]) / dk**2
    return out


def apply_Q(f: GridField, theta_bar: float, params: ModelParams) -> GridField:
    """Collision operator Q(f) = -kappa df/dtheta - lam sin(theta_bar - theta) df/dkappa
    + lam d/dkappa(kappa f) + alpha^2 d2f/dkappa2, discretized with centered differences.

    Only the interior (grid.interior_mask()) carries the second-order stencil;
    the kappa boundary rows fall back to one-sided differences.
    """
    g = f.grid
    th, ka = g.meshgrid()
    v = f.values
    out = (
        -ka * _d_theta(v, g.d_theta)
        - params.lam * np.sin(theta_bar - th) * _d_kappa(v, g.d_kappa)
        + params.lam * _d_kappa(ka * v, g.d_kappa)
        + params.alpha**2 * _d2_kappa(v, g.d_kappa)
    )
    return GridField(g, out)


def apply_L(psi: GridField, params: ModelParams) -> GridField:
    """Invariant-defining operator L(psi) = kappa dpsi/dtheta - lam sin(theta) dpsi/dkappa
    - lam kappa dpsi/dkappa + alpha^2 d2psi/dkappa2, same discretization contract as apply_Q."""
    g = psi.grid
    th, ka = g.meshgrid()
    v = psi.values
    out = (
        ka * _d_theta(v, g.d_theta)
        - params.lam * np.sin(th) * _d_kappa(v, g.d_kappa)
        - params.lam * ka * _d_kappa(v, g.d_kappa)
        + params.alpha**2 * _d2_kappa(v, g.d_kappa)
    )
    return GridField(g, out)


def residual_inf(psi: GridField, params: ModelParams) -> float:
    """Sup over interior grid points of |L(psi) + sin(theta)|."""
    th, _ = psi.grid.meshgrid()
    res = apply_L(psi, params).values + np.sin(th)
    return float(np.max(np.abs(res[psi.grid.interior_mask()])))


def dissipation(f: GridField, params: ModelParams):
    """Entropy dissipation: integral of Q(f) * f / mu_theta_bar.

    Non-positive up to discretization slack; returns None when the field is
    isotropic (no flux direction).
    """
    from .equilibrium import mu_pdf

    theta_bar = flux_direction(f)
    if theta_bar is None:
        return None
    th, ka = f.grid.meshgrid()
    mu_tb = mu_pdf(params, th - theta_bar, ka)
    q = apply_Q(f, theta_bar, params)
    return f.integrate(q.values * f.values / mu_tb)
