"""Monte-Carlo construction of the collisional invariant from its probabilistic representation.

The operator L generates the SDE

    dtheta = kappa dt,
    dkappa = -lam (sin theta + kappa) dt + sqrt(2) alpha dB_t,

whose invariant measure is the equilibrium mu.  Exponential mixing gives the
representation psi(theta0, kappa0) = integral_0^inf E[sin theta_s] ds, which is
estimated by Euler-Maruyama ensembles with antithetic pairing over the noise
sign B -> -B.  Because (theta, kappa, B) -> (-theta, -kappa, -B) is an exact
pathwise symmetry of the dynamics, noise-sign pairing also makes the oddness
psi(-theta, -kappa) = -psi(theta, kappa) exact for the estimator.  This module
is the independent cross-check of the spectral solver.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .equilibrium import ModelParams, theta_nodes, von_mises_pdf, wrap_angle

__all__ = ["OracleConfig", "simulate_linear_sde", "feynman_kac_psi", "mc_c2", "MCC2Result"]

#: antithetic pairs simulated per chunk (bounds memory at ~ chunk * n_steps doubles)
CHUNK_PAIRS = 2048


@dataclass(frozen=True)
class OracleConfig:
    """Ensemble configuration: model, time step, truncation horizon, path count, seed."""

    model: ModelParams
    dt: float
    t_final: float
    paths: int
    seed: int

    def __post_init__(self):
        lam = self.model.lam
        if not self.dt > 0 or self.dt > 0.01 * min(1.0, 1.0 / lam):
            raise ValueError(f"dt must satisfy 0 < dt <= 0.01*min(1, 1/lam), got {self.dt}")
        if self.t_final < 10.0 / lam:
            raise ValueError(f"t_final must be >= 10/lam for mixing, got {self.t_final}")
        if self.paths < 2:
            raise ValueError("need at least 2 paths (one antithetic pair)")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


def _path_rng(seed: int, stream: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, stream index); reproducible under any scheduling."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def simulate_linear_sde(cfg: OracleConfig, theta0: float, kappa0: float):
    """One Euler-Maruyama trajectory from (theta0, kappa0).

    Returns (t, theta, kappa) arrays of length n_steps + 1; theta is integrated
    unwrapped and reported wrapped to (-pi, pi].
    """
    lam, alpha = cfg.model.lam, cfg.model.alpha
    n = cfg.n_steps
    rng = _path_rng(cfg.seed, 0)
    noise = rng.standard_normal(n) * math.sqrt(2.0 * cfg.dt) * alpha
    theta = np.empty(n + 1)
    kappa = np.empty(n + 1)
    theta[0], kappa[0] = theta0, kappa0
    for i in range(n):
        theta[i + 1] = theta[i] + kappa[i] * cfg.dt
        kappa[i + 1] = kappa[i] - lam * (math.sin(theta[i]) + kappa[i]) * cfg.dt + noise[i]
    t = cfg.dt * np.arange(n + 1)
    return t, wrap_angle(theta), kappa


def _integrate_sin(cfg: OracleConfig, theta0, kappa0, noise):
    """Vectorized Euler-Maruyama; returns (trapezoid integral of sin(theta_s), final sin(theta))."""
    lam = cfg.model.lam
    dt = cfg.dt
    n = cfg.n_steps
    theta = np.array(theta0, dtype=float, copy=True)
    kappa = np.array(kappa0, dtype=float, copy=True)
    s = np.sin(theta)  # shared between the drift and the running integral
    acc = 0.5 * s
    for i in range(n):
        theta += kappa * dt
        kappa += -lam * (s + kappa) * dt + noise[i]
        s = np.sin(theta)
        acc += s
    acc -= 0.5 * s
    return acc * dt, s


def feynman_kac_psi(cfg: OracleConfig, theta0: float, kappa0: float, stream_offset: int = 0) -> dict:
    """Estimate psi(theta0, kappa0) = integral_0^t_final E[sin theta_s] ds.

    Antithetic pairs share a noise stream with flipped sign; by the exact
    mirror symmetry of the dynamics this also makes the oddness
    psi(-theta,-kappa) = -psi(theta,kappa) exact for the estimator.  Streams
    are keyed by (seed, stream_offset + pair index), so multiple probe points
    can be decorrelated via stream_offset.

    Returns dict(estimate=..., std_error=..., tail=E[sin theta at t_final]).
    Warns if the tail mean exceeds 3x its own standard error, signaling an
    insufficient horizon.
    """
    n_pairs = cfg.paths // 2
    scale = math.sqrt(2.0 * cfg.dt) * cfg.model.alpha
    values = np.empty(n_pairs)
    tails = np.empty(n_pairs)  # one pair-averaged tail per antithetic pair
    done = 0
    while done < n_pairs:
        chunk = min(CHUNK_PAIRS, n_pairs - done)
        noise = np.empty((cfg.n_steps, chunk))
        for p in range(chunk):
            rng = _path_rng(cfg.seed, stream_offset + done + p)
            noise[:, p] = rng.standard_normal(cfg.n_steps)
        noise *= scale
        s_plus, tail_plus = _integrate_sin(
            cfg, np.full(chunk, theta0), np.full(chunk, kappa0), noise
        )
        s_minus, tail_minus = _integrate_sin(
            cfg, np.full(chunk, theta0), np.full(chunk, kappa0), -noise
        )
        values[done : done + chunk] = 0.5 * (s_plus + s_minus)
        tails[done : done + chunk] = 0.5 * (tail_plus + tail_minus)
        done += chunk
    estimate = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(n_pairs)) if n_pairs > 1 else float("inf")
    tail_mean = float(np.mean(tails))
    tail_se = float(np.std(tails, ddof=1) / math.sqrt(len(tails)))
    if abs(tail_mean) > 3.0 * max(tail_se, 1e-300):
        warnings.warn(
            f"horizon t_final={cfg.t_final} may be too short: "
            f"|E[sin theta(t_final)]| = {abs(tail_mean):.3e} > 3 x {tail_se:.3e}",
            RuntimeWarning,
        )
    return {"estimate": estimate, "std_error": std_error, "tail": tail_mean}


@dataclass(frozen=True)
class MCC2Result:
    """Monte-Carlo convection coefficient and its ingredients."""

    c2: float
    std_error: float
    gamma1: float
    gamma1_std_error: float
    gamma2: float
    gamma2_std_error: float

    def __float__(self) -> float:
        return self.c2


def mc_c2(cfg: OracleConfig, n_grid_theta: int, n_grid_kappa: int) -> MCC2Result:
    """Convection coefficient c2 = <sin cos psi>_mu / <sin psi>_mu from Monte-Carlo psi.

    psi is estimated on a product grid: uniform periodic nodes in theta
    (trapezoid against the Von Mises weight) times Gauss-Hermite nodes in kappa
    (exact against the Gaussian weight); each grid point uses its own
    decorrelated path streams, with cfg.paths paths per point.
    """
    model = cfg.model
    th = theta_nodes(n_grid_theta)
    w_th = von_mises_pdf(model, th) * (2.0 * math.pi / n_grid_theta)
    nodes, weights = np.polynomial.hermite_e.hermegauss(n_grid_kappa)
    ka = nodes * model.alpha / math.sqrt(model.lam)
    w_ka = weights / math.sqrt(2.0 * math.pi)

    g1 = g2 = v1 = v2 = 0.0
    point = 0
    for i in range(n_grid_theta):
        for j in range(n_grid_kappa):
            res = feynman_kac_psi(cfg, th[i], ka[j], stream_offset=point * cfg.paths)
            w = w_th[i] * w_ka[j]
            g1 += w * math.sin(th[i]) * res["estimate"]
            g2 += w * math.sin(th[i]) * math.cos(th[i]) * res["estimate"]
            v1 += (w * math.sin(th[i]) * res["std_error"]) ** 2
            v2 += (w * math.sin(th[i]) * math.cos(th[i]) * res["std_error"]) ** 2
            point += 1
    if g1 == 0.0:
        raise ZeroDivisionError("Monte-Carlo gamma1 vanished; cannot form c2")
    c2 = g2 / g1
    # delta method for the ratio of independent-point sums
    se = abs(c2) * math.sqrt(v2 / g2**2 + v1 / g1**2) if g2 != 0 else math.sqrt(v2) / abs(g1)
    return MCC2Result(
        c2=float(c2),
        std_error=float(se),
        gamma1=float(g1),
        gamma1_std_error=math.sqrt(v1),
        gamma2=float(g2),
        gamma2_std_error=math.sqrt(v2),
    )
