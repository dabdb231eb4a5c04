"""Closed-form local equilibria of the collision operator and their moments.

The stationary local state is the product mu(theta, kappa) = M(theta) N(kappa)
of a Von Mises distribution in the heading angle (concentration lambda^2/alpha^2)
and a centered Gaussian in the curvature (variance alpha^2/lambda).  The drift
coefficient of the macroscopic density equation is the Bessel ratio
c1 = I1(lambda^2/alpha^2) / I0(lambda^2/alpha^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import bessel_i

__all__ = [
    "ModelParams",
    "DimensionalParams",
    "Equilibrium",
    "nondimensionalize",
    "von_mises_pdf",
    "gaussian_pdf",
    "mu_pdf",
    "c1_coefficient",
    "c1_quadrature",
    "equilibrium_flux",
    "wrap_angle",
    "theta_nodes",
    "kappa_cutoff",
]

#: default number of nodes for periodic-trapezoid quadrature in theta
THETA_QUAD_NODES = 512


def wrap_angle(theta):
    """Wrap angle(s) to the canonical interval (-pi, pi]."""
    w = np.mod(-np.asarray(theta) + np.pi, 2.0 * np.pi)
    out = np.pi - w
    # mod maps -pi to itself; fold the open endpoint
    out = np.where(out == -np.pi, np.pi, out)
    if np.ndim(theta) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class ModelParams:
    """Scaled model parameters: relaxation rate lam and noise intensity alpha."""

    lam: float
    alpha: float

    def __post_init__(self):
        if not (self.lam > 0 and self.alpha > 0):
            raise ValueError(f"lam and alpha must be positive, got {self.lam}, {self.alpha}")

    @property
    def concentration(self) -> float:
        """Von Mises concentration lambda^2/alpha^2."""
        return self.lam**2 / self.alpha**2

    @property
    def kappa_variance(self) -> float:
        """Stationary curvature variance alpha^2/lambda."""
        return self.alpha**2 / self.lam


@dataclass(frozen=True)
class DimensionalParams:
    """Dimensional parameters: relaxation frequency a, noise b, speed c, comfort curvature upsilon."""

    a: float
    b: float
    c: float
    upsilon: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > 0 and self.upsilon > 0):
            raise ValueError("all dimensional parameters must be strictly positive")


@dataclass(frozen=True)
class Equilibrium:
    """An equilibrium rho * mu_theta_bar: total mass rho and flux direction theta_bar."""

    rho: float
    theta_bar: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        object.__setattr__(self, "theta_bar", wrap_angle(self.theta_bar))


def nondimensionalize(p: DimensionalParams) -> ModelParams:
    """Map dimensional parameters to the scaled pair: lam = a/(c*upsilon), alpha = sqrt(b^2/(2 c upsilon^3))."""
    lam = p.a / (p.c * p.upsilon)
    alpha = math.sqrt(p.b**2 / (2.0 * p.c * p.upsilon**3))
    return ModelParams(lam=lam, alpha=alpha)


def von_mises_pdf(params: ModelParams, theta):
    """Von Mises density M(theta) = C0 exp((lam^2/alpha^2) cos theta), C0 = 1/(2 pi I0(lam^2/alpha^2))."""
    k = params.concentration
    c0 = 1.0 / (2.0 * math.pi * bessel_i(0, k))
    return c0 * np.exp(k * np.cos(theta))


def gaussian_pdf(params: ModelParams, kappa):
    """Gaussian density N(kappa) with mean 0 and variance alpha^2/lam."""
    var = params.kappa_variance
    return np.exp(-np.asarray(kappa) ** 2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def mu_pdf(params: ModelParams, theta, kappa):
    """Equilibrium density mu(theta, kappa) = M(theta) N(kappa)."""
    return von_mises_pdf(params, theta) * gaussian_pdf(params, kappa)


def c1_coefficient(params: ModelParams) -> float:
    """Density drift speed c1 = I1(lam^2/alpha^2) / I0(lam^2/alpha^2)."""
    k = params.concentration
    return bessel_i(1, k) / bessel_i(0, k)


def c1_quadrature(params: ModelParams, n_nodes: int = THETA_QUAD_NODES) -> float:
    """c1 evaluated as the quadrature of cos(theta) M(theta) over (-pi, pi]; cross-check route."""
    theta = theta_nodes(n_nodes)
    w = 2.0 * math.pi / n_nodes
    return float(np.sum(np.cos(theta) * von_mises_pdf(params, theta)) * w)


def equilibrium_flux(eq: Equilibrium, params: ModelParams) -> np.ndarray:
    """Flux vector of rho * mu_theta_bar: rho c1 (cos theta_bar, sin theta_bar)."""
    c1 = c1_coefficient(params)
    return eq.rho * c1 * np.array([math.cos(eq.theta_bar), math.sin(eq.theta_bar)])


def theta_nodes(n_nodes: int = THETA_QUAD_NODES) -> np.ndarray:
    """Uniform periodic nodes on [-pi, pi), spacing 2 pi / n_nodes."""
    return -math.pi + 2.0 * math.pi * np.arange(n_nodes) / n_nodes


def kappa_cutoff(params: ModelParams, n_sigma: float = 12.0) -> float:
    """Truncation |kappa| <= n_sigma * alpha / sqrt(lam); Gaussian tail beyond is < 1e-31 at the default."""
    return n_sigma * params.alpha / math.sqrt(params.lam)
