"""Offline effective-resistance sparsification: the coreset reducer.

Each edge is kept independently with probability min(1, rho * leverage) and
reweighted by 1/p, which keeps the expected Laplacian unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, WeightedEdge, DEFAULT_SOLVER, SolverConfig, laplacian, pseudo_inverse
from .rng import UniformByIndex


@dataclass(frozen=True)
class OfflineSampleConfig:
    rho: float
    seed: int = 0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")


def keep_probabilities(g: Graph, rho: float, cfg: SolverConfig = DEFAULT_SOLVER) -> np.ndarray:
    """min(1, rho * leverage(e)) per edge; leverage is per connected
    component (the pseudoinverse handles disconnection transparently)."""
    if g.m == 0:
        return np.zeros(0)
    Lp = pseudo_inverse(laplacian(g), cfg)
    p = np.empty(g.m)
    for i, (u, v, w) in enumerate(g.edges):
        lev = w * (Lp[u, u] + Lp[v, v] - 2.0 * Lp[u, v])
        p[i] = min(1.0, rho * lev)
    return p


def er_sparsify(g: Graph, cfg: OfflineSampleConfig,
                solver: SolverConfig = DEFAULT_SOLVER) -> Graph:
    """Independent effective-resistance sampling, edge order preserved.

    Decisions are keyed by (seed, edge index), so the output is reproducible
    regardless of iteration strategy.
    """
    p = keep_probabilities(g, cfg.rho, solver)
    draws = UniformByIndex(cfg.seed)
    kept: list[WeightedEdge] = []
    for i, e in enumerate(g.edges):
        if draws.uniform(i) < p[i]:
            kept.append(WeightedEdge(e.u, e.v, e.w / p[i]))
    return Graph(g.n, kept)
