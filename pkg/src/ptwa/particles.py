"""Stochastic particle simulation of the curvature-controlled alignment model.

Each agent carries position, heading angle, and trajectory curvature.  The
curvature relaxes toward the target sin(theta_bar - theta) set by the mean
heading of neighbors within a perception radius (periodic minimum image), plus
Brownian forcing; the heading integrates the curvature and the position
integrates the heading.  Diagnostics track the empirical order parameter,
curvature variance, and angle/curvature histograms against the closed-form
equilibrium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import ModelParams, wrap_angle

__all__ = [
    "AgentState",
    "Agents",
    "SimConfig",
    "SimStats",
    "neighbor_indices_brute",
    "neighbor_indices_cell",
    "neighbor_mean_direction",
    "target_curvature",
    "step",
    "collect_stats",
    "initial_state",
    "run_simulation",
]

#: neighborhood flux below this magnitude counts as empty/cancelled
J_TOL = 1e-12
#: histogram bins for the angle and curvature diagnostics
HIST_BINS = 36
#: stream index reserved for drawing the initial condition
INIT_STREAM = 2**62


@dataclass(frozen=True)
class AgentState:
    """A single agent: position in the periodic box, heading angle, curvature."""

    x: np.ndarray
    theta: float
    kappa: float


@dataclass(frozen=True)
class Agents:
    """Column store of agent states: x shape (N, 2), theta and kappa shape (N,)."""

    x: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        if self.x.shape != (len(self.theta), 2) or self.kappa.shape != self.theta.shape:
            raise ValueError("inconsistent agent array shapes")

    def __len__(self) -> int:
        return len(self.theta)

    def __getitem__(self, i: int) -> AgentState:
        return AgentState(self.x[i].copy(), float(self.theta[i]), float(self.kappa[i]))


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters; dt must satisfy dt <= 0.1/max(1, lam)."""

    n_agents: int
    box_size: float
    radius: float
    model: ModelParams
    dt: float
    seed: int
    include_self: bool = True

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValueError("n_agents must be >= 1")
        if not (self.box_size > 0 and self.radius > 0):
            raise ValueError("box_size and radius must be positive")
        if not 0 < self.dt <= 0.1 / max(1.0, self.model.lam):
            raise ValueError(f"dt must satisfy 0 < dt <= 0.1/max(1, lam), got {self.dt}")

    @property
    def global_coupling(self) -> bool:
        """Radius covers the whole periodic box (max distance is L*sqrt(2)/2)."""
        return self.radius >= self.box_size * math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class SimStats:
    """Empirical-measure diagnostics of one snapshot."""

    order_parameter: float
    mean_direction: float
    curvature_variance: float
    relative_angle_histogram: np.ndarray
    relative_angle_edges: np.ndarray
    curvature_histogram: np.ndarray
    curvature_edges: np.ndarray


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def _min_image(dx: np.ndarray, box: float) -> np.ndarray:
    return dx - box * np.round(dx / box)


def neighbor_indices_brute(x: np.ndarray, i: int, radius: float, box: float) -> np.ndarray:
    """All-pairs neighbor search with the periodic minimum image; O(N) per query."""
    d = _min_image(x - x[i], box)
    return np.flatnonzero(np.einsum("ij,ij->i", d, d) < radius**2)


def _cell_table(x: np.ndarray, radius: float, box: float):
    n_cells = max(1, int(box / radius))
    cell = np.floor(x / box * n_cells).astype(int) % n_cells
    table: dict[tuple[int, int], list[int]] = {}
    for idx, (cx, cy) in enumerate(cell):
        table.setdefault((int(cx), int(cy)), []).append(idx)
    return n_cells, cell, table


def neighbor_indices_cell(x: np.ndarray, i: int, radius: float, box: float) -> np.ndarray:
    """Cell-list neighbor search; requires radius <= box/2 for correctness."""
    n_cells, cell, table = _cell_table(x, radius, box)
    cx, cy = int(cell[i, 0]), int(cell[i, 1])
    candidates: list[int] = []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            candidates.extend(table.get(((cx + ox) % n_cells, (cy + oy) % n_cells), []))
    candidates = np.unique(np.array(candidates, dtype=int))
    d = _min_image(x[candidates] - x[i], box)
    return candidates[np.einsum("ij,ij->i", d, d) < radius**2]


def neighbor_mean_direction(agents: Agents, i: int, cfg: SimConfig):
    """Direction of J_i = sum of tau(theta_j) over neighbors of agent i, or None if cancelled."""
    if cfg.global_coupling:
        idx = np.arange(len(agents))
    elif cfg.radius <= cfg.box_size / 2.0:
        idx = neighbor_indices_cell(agents.x, i, cfg.radius, cfg.box_size)
    else:
        idx = neighbor_indices_brute(agents.x, i, cfg.radius, cfg.box_size)
    if not cfg.include_self:
        idx = idx[idx != i]
    if len(idx) == 0:
        return None
    jx = float(np.sum(np.cos(agents.theta[idx])))
    jy = float(np.sum(np.sin(agents.theta[idx])))
    if math.hypot(jx, jy) <= J_TOL:
        return None
    return math.atan2(jy, jx)


def target_curvature(theta_i: float, omega_bar: float) -> float:
    """Cross product tau(theta_i) x tau(omega_bar) = sin(omega_bar - theta_i)."""
    return math.sin(omega_bar - theta_i)


def _kappa_bar_all(agents: Agents, cfg: SimConfig) -> np.ndarray:
    """Synchronous target curvatures from the pre-step configuration.

    Empty or exactly cancelled neighborhoods (reachable only with
    include_self=False) fall back to kappa_bar = 0.
    """
    n = len(agents)
    cos_t, sin_t = np.cos(agents.theta), np.sin(agents.theta)
    if cfg.global_coupling:
        jx = np.full(n, np.sum(cos_t))
        jy = np.full(n, np.sum(sin_t))
        if not cfg.include_self:
            jx -= cos_t
            jy -= sin_t
        norm = np.hypot(jx, jy)
        # kappa_bar = tau(theta) x J/|J| = (cos*Jy - sin*Jx)/|J|
        with np.errstate(invalid="ignore", divide="ignore"):
            kb = (cos_t * jy - sin_t * jx) / norm
        return np.where(norm > J_TOL, kb, 0.0)
    kb = np.zeros(n)
    for i in range(n):
        omega_bar = neighbor_mean_direction(agents, i, cfg)
        if omega_bar is not None:
            kb[i] = target_curvature(float(agents.theta[i]), omega_bar)
    return kb


def step(agents: Agents, cfg: SimConfig, step_index: int = 0) -> Agents:
    """One synchronous Euler-Maruyama step.

    Update order within the step: curvature first (relaxation toward the
    pre-step targets plus noise), then heading integrates the new curvature,
    then position integrates the new heading.  Noise is drawn from a
    counter-based stream keyed by (seed, step_index), so trajectories are
    bit-reproducible independent of scheduling.
    """
    lam, alpha = cfg.model.lam, cfg.model.alpha
    kb = _kappa_bar_all(agents, cfg)
    xi = _rng(cfg.seed, step_index).standard_normal(len(agents))
    kappa = agents.kappa + lam * (kb - agents.kappa) * cfg.dt + math.sqrt(2.0 * cfg.dt) * alpha * xi
    theta = wrap_angle(agents.theta + kappa * cfg.dt)
    tau = np.column_stack([np.cos(theta), np.sin(theta)])
    x = np.mod(agents.x + tau * cfg.dt, cfg.box_size)
    return Agents(x=x, theta=theta, kappa=kappa)


def collect_stats(agents: Agents) -> SimStats:
    """Order parameter, mean direction, curvature variance, and the two histograms."""
    n = len(agents)
    jx = float(np.mean(np.cos(agents.theta)))
    jy = float(np.mean(np.sin(agents.theta)))
    mean_dir = math.atan2(jy, jx)
    rel = wrap_angle(agents.theta - mean_dir)
    angle_hist, angle_edges = np.histogram(rel, bins=HIST_BINS, range=(-math.pi, math.pi))
    kappa_hist, kappa_edges = np.histogram(agents.kappa, bins=HIST_BINS)
    return SimStats(
        order_parameter=math.hypot(jx, jy),
        mean_direction=mean_dir,
        curvature_variance=float(np.var(agents.kappa)),
        relative_angle_histogram=angle_hist,
        relative_angle_edges=angle_edges,
        curvature_histogram=kappa_hist,
        curvature_edges=kappa_edges,
    )


def initial_state(cfg: SimConfig) -> Agents:
    """Uniform positions and headings, stationary Gaussian curvatures, from a reserved stream."""
    rng = _rng(cfg.seed, INIT_STREAM)
    n = cfg.n_agents
    x = rng.uniform(0.0, cfg.box_size, size=(n, 2))
    theta = rng.uniform(-math.pi, math.pi, size=n)
    kappa = rng.standard_normal(n) * math.sqrt(cfg.model.kappa_variance)
    return Agents(x=x, theta=wrap_angle(theta), kappa=kappa)


def run_simulation(cfg: SimConfig, t_final: float, stats_every: int = 100, callback=None):
    """Run from the seeded initial condition to t_final.

    Returns (final Agents, list of (t, SimStats) taken every stats_every steps
    and at the final step).  The optional callback(step_index, t, agents) runs
    after every step; use it for trajectory dumps.
    """
    n_steps = int(round(t_final / cfg.dt))
    agents = initial_state(cfg)
    history = []
    for s in range(n_steps):
        agents = step(agents, cfg, step_index=s)
        t = (s + 1) * cfg.dt
        if callback is not None:
            callback(s, t, agents)
        if (s + 1) % stats_every == 0 or s + 1 == n_steps:
            history.append((t, collect_stats(agents)))
    return agents, history
