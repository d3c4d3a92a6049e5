"""Hypergraphs, their energy form, and online hyperedge sparsifiers.

The energy of a hypergraph generalizes the Laplacian quadratic form:
Q(x) = sum_e w(e) * max_{u,v in e} (x_u - x_v)^2. Two online sampling rules
are provided. The fast variant scores each hyperedge by the largest sketch
resistance over its clique pairs; the balanced variant first splits the
hyperedge weight across its pairs with a balanced assignment, which brings
the sample count down at the cost of running the balancing loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .balance import BalanceConfig, clique_pairs, get_weight_assignment
from .graph import (DisconnectedError, Graph, IncidenceRow, WeightedEdge,
                    pseudo_inverse)
from .online import OnlineSamplerState, default_c
from .rng import UniformByIndex, spawn_seed


@dataclass(frozen=True)
class Hyperedge:
    vertices: tuple[int, ...]
    w: float

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(verts) < 2:
            raise ValueError("hyperedge needs at least two vertices")
        if len(set(verts)) != len(verts):
            raise ValueError("hyperedge vertices must be distinct")
        if self.w <= 0:
            raise ValueError("hyperedge weight must be positive")
        object.__setattr__(self, "vertices", verts)

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass
class Hypergraph:
    n: int
    hyperedges: list[Hyperedge] = field(default_factory=list)

    def __post_init__(self):
        for e in self.hyperedges:
            if e.vertices[-1] >= self.n or e.vertices[0] < 0:
                raise ValueError("hyperedge endpoint out of range")

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    @property
    def r(self) -> int:
        """Rank: the largest hyperedge size (2 for an empty hypergraph)."""
        return max((e.size for e in self.hyperedges), default=2)

    def add(self, e: Hyperedge) -> None:
        if e.vertices[-1] >= self.n:
            raise ValueError("hyperedge endpoint out of range")
        self.hyperedges.append(e)


def hyper_energy(h: Hypergraph, x: np.ndarray) -> float:
    """Q(x) = sum_e w(e) * max_{u,v in e} (x_u - x_v)^2."""
    x = np.asarray(x, dtype=float)
    if x.shape != (h.n,):
        raise ValueError("x must have one entry per vertex")
    total = 0.0
    for e in h.hyperedges:
        vals = x[list(e.vertices)]
        spread = vals.max() - vals.min()
        total += e.w * spread * spread
    return total


def associated_graph(h: Hypergraph) -> Graph:
    """Clique expansion: each hyperedge contributes all of its pairs, every
    pair carrying the full hyperedge weight. Parallel edges are kept."""
    edges = [WeightedEdge(u, v, e.w)
             for e in h.hyperedges for u, v in clique_pairs(e.vertices)]
    return Graph(h.n, edges)


def quantize_weight(w: float, eps: float) -> float:
    """Round w to the nearest power of (1 + eps) in log scale."""
    if w <= 0:
        raise ValueError("weight must be positive")
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    k = round(math.log(w) / math.log1p(eps))
    return (1.0 + eps) ** k


def fast_rho(r: int, m: int, eps: float, delta: float = 0.1,
             beta: float = 0.5) -> float:
    """Oversampling rate of the fast variant: beta * r^4 * ln(m/delta) / eps^2."""
    return beta * r ** 4 * math.log(max(m, 2) / delta) / (eps * eps)


def balanced_rho(r: int, m: int, eps: float, beta: float = 0.5) -> float:
    """Oversampling rate of the balanced variant: beta * ln m * ln(2r) / eps^2."""
    return beta * math.log(max(m, 2)) * math.log(2 * r) / (eps * eps)


class HyperDecision(NamedTuple):
    kept: bool
    p: float
    score: float          # max pair score before the rho multiplier


@dataclass
class HyperSamplerConfig:
    rho: float
    variant: str = "fast"            # "fast" | "balanced"
    gamma: float = 2.0
    c: float | None = None           # row-sampler multiplier; None -> default
    eps: float = 1.0
    seed: int = 0
    m_hint: int = 1024               # expected clique-row count, for default c

    def __post_init__(self):
        if self.variant not in ("fast", "balanced"):
            raise ValueError("variant must be 'fast' or 'balanced'")
        if self.rho <= 0:
            raise ValueError("rho must be positive")


class HyperSamplerState:
    """Sequential online hyperedge sampler.

    Clique rows of every arriving hyperedge update the shared row-sampler
    sketch whether or not the hyperedge itself is kept; keep decisions are
    keyed by (seed, hyperedge index).
    """

    def __init__(self, n: int, cfg: HyperSamplerConfig):
        self.n = n
        self.cfg = cfg
        c = cfg.c if cfg.c is not None else default_c(cfg.m_hint, cfg.eps)
        self.sampler = OnlineSamplerState(n, c, seed=spawn_seed(cfg.seed, 1),
                                          eps=cfg.eps)
        self.kept: list[tuple[Hyperedge, float]] = []  # (edge, 1/p factor)
        self.seen = 0
        self._draws = UniformByIndex(cfg.seed)
        self._balance = BalanceConfig(gamma=cfg.gamma)

    # -- pair scoring against the sketch -------------------------------

    def _pair_scores(self, e: Hyperedge) -> float:
        """max over clique pairs of w(e) * resistance on the sketch Gram
        matrix; infinite when a pair straddles sketch components."""
        G = self.sampler.sketch.gram
        Gp = pseudo_inverse(G)
        best = 0.0
        for u, v in clique_pairs(e.vertices):
            d = np.zeros(self.n)
            d[u], d[v] = 1.0, -1.0
            x = Gp @ d
            if np.linalg.norm(G @ x - d) > 1e-6 * math.sqrt(2.0):
                return math.inf
            best = max(best, e.w * float(d @ x))
        return best

    def _decide(self, e: Hyperedge, p: float, score: float) -> HyperDecision:
        idx = self.seen
        self.seen += 1
        kept = self._draws.uniform(idx) < p
        if kept:
            self.kept.append((e, 1.0 / p))
        return HyperDecision(kept, p, score)

    # -- the two sampling rules ----------------------------------------

    def step(self, e: Hyperedge) -> HyperDecision:
        if self.cfg.variant == "balanced":
            return balanced_hyper_sparsify_step(self, e)
        return fast_hyper_sparsify_step(self, e)

    def sparsifier(self) -> Hypergraph:
        """Kept hyperedges with weights scaled by 1/p, in arrival order."""
        out = Hypergraph(self.n)
        for e, factor in self.kept:
            out.add(Hyperedge(e.vertices, e.w * factor))
        return out


def fast_hyper_sparsify_step(state: HyperSamplerState,
                             e: Hyperedge) -> HyperDecision:
    """Feed all clique rows to the row sampler, then keep the hyperedge with
    probability min(1, rho * max pair resistance)."""
    s = math.sqrt(e.w)
    for u, v in clique_pairs(e.vertices):
        state.sampler.process_row(IncidenceRow(u, v, s))
    score = state._pair_scores(e)
    p = min(1.0, state.cfg.rho * score)
    return state._decide(e, p, score)


def balanced_hyper_sparsify_step(state: HyperSamplerState,
                                 e: Hyperedge) -> HyperDecision:
    """Split w(e) across the clique with a balanced assignment, feed the
    positively weighted rows, and keep with min(1, 2 * rho * max pair score).

    A balancing failure (iteration cap) propagates as BalanceError.
    """
    assignment = get_weight_assignment(state.sampler.sketch, e, state._balance)
    for (u, v), z in zip(assignment.pairs, assignment.z):
        if z > 0:
            state.sampler.process_row(IncidenceRow(u, v, math.sqrt(z)))
    score = state._pair_scores(e)
    p = min(1.0, 2.0 * state.cfg.rho * score)
    return state._decide(e, p, score)


def hyper_sparsify(h: Hypergraph, variant: str = "fast", eps: float = 1.0,
                   beta: float = 0.5, delta: float = 0.1, gamma: float = 2.0,
                   seed: int = 0, rho: float | None = None) -> Hypergraph:
    """One-shot run over a whole hyperedge list with the default rho."""
    if rho is None:
        rho = (balanced_rho(h.r, h.m, eps, beta) if variant == "balanced"
               else fast_rho(h.r, h.m, eps, delta, beta))
    rows = sum(e.size * (e.size - 1) // 2 for e in h.hyperedges)
    cfg = HyperSamplerConfig(rho=rho, variant=variant, gamma=gamma, eps=eps,
                             seed=seed, m_hint=max(rows, 2))
    state = HyperSamplerState(h.n, cfg)
    for e in h.hyperedges:
        state.step(e)
    return state.sparsifier()
