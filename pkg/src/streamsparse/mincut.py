"""Global min-cut: exact desk-scale oracles and the streaming pipeline.

The streaming path sparsifies the edge stream to (1 + eps) spectral accuracy
(cut values are quadratic forms on 0/1 indicators, so cuts inherit the
bound), then finds the minimum over all near-minimum cuts of the sparsifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .merge_reduce import (OnlineConfig, StreamPipelineConfig, TreeConfig,
                           eps_per_level, stream_sparsify)

_BRUTE_FORCE_MAX = 10    # exact_mincut switches to Stoer-Wagner above this
_ENUMERATE_MAX = 20      # hard cap for exhaustive cut enumeration


class CapabilityError(ValueError):
    """The requested exact computation is beyond the supported size."""


@dataclass(frozen=True)
class Cut:
    side: frozenset[int]
    value: float


@dataclass(frozen=True)
class MinCutPipelineConfig:
    eps: float = 0.25
    near_factor: float = 4.0
    seed: int = 0
    block_size: int = 256
    stream: StreamPipelineConfig | None = None   # overrides the defaults

    def __post_init__(self):
        if self.near_factor < 1:
            raise ValueError("near_factor must be >= 1")
        if not 0 < self.eps < 1:
            raise ValueError("eps must be in (0, 1)")


def cut_value(g: Graph, side) -> float:
    s = frozenset(side)
    return float(sum(e.w for e in g.edges if (e.u in s) != (e.v in s)))


def _all_cut_values(g: Graph) -> np.ndarray:
    """Value of every proper cut, indexed by the bitmask over vertices
    0..n-2 (vertex n-1 is pinned to the zero side to kill mirror images)."""
    masks = np.arange(1 << (g.n - 1), dtype=np.int64)
    values = np.zeros(masks.shape[0])
    for u, v, w in g.edges:
        bu = (masks >> u) & 1 if u < g.n - 1 else np.zeros_like(masks)
        bv = (masks >> v) & 1 if v < g.n - 1 else np.zeros_like(masks)
        values += w * (bu != bv)
    return values


def _mask_side(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n - 1) if (mask >> i) & 1)


def exact_mincut(g: Graph) -> Cut:
    """Minimum-weight global cut: brute force for small n, Stoer-Wagner
    otherwise. Disconnected input yields a zero-value cut."""
    if g.n < 2:
        raise ValueError("min cut needs at least two vertices")
    if g.n <= _BRUTE_FORCE_MAX:
        values = _all_cut_values(g)
        best = int(values[1:].argmin()) + 1
        return Cut(_mask_side(best, g.n), float(values[best]))
    return stoer_wagner(g)


def stoer_wagner(g: Graph) -> Cut:
    """Deterministic global min cut by repeated maximum-adjacency phases."""
    n = g.n
    W = np.zeros((n, n))
    for u, v, w in g.edges:
        W[u, v] += w
        W[v, u] += w
    groups = [[i] for i in range(n)]     # groups[i]: original vertices merged into i
    active = list(range(n))
    best_value = math.inf
    best_side: frozenset[int] = frozenset()
    while len(active) > 1:
        # maximum-adjacency ordering of the active (merged) vertices
        order = [active[0]]
        conn = {v: W[active[0], v] for v in active[1:]}
        while conn:
            nxt = max(conn, key=conn.get)
            order.append(nxt)
            del conn[nxt]
            for v in conn:
                conn[v] += W[nxt, v]
        s, t = order[-2], order[-1]
        phase_value = float(sum(W[t, v] for v in active if v != t))
        if phase_value < best_value:
            best_value = phase_value
            best_side = frozenset(groups[t])
        # merge t into s
        for v in active:
            if v not in (s, t):
                W[s, v] += W[t, v]
                W[v, s] = W[s, v]
        groups[s] = groups[s] + groups[t]
        active.remove(t)
    return Cut(best_side, best_value)


def enumerate_near_min_cuts(g: Graph, factor: float) -> list[Cut]:
    """All proper cuts with value <= factor * min cut value. Exhaustive;
    guarded to n <= 20."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if g.n > _ENUMERATE_MAX:
        raise CapabilityError(
            f"cut enumeration supports n <= {_ENUMERATE_MAX}, got {g.n}")
    values = _all_cut_values(g)
    cstar = values[1:].min()
    # tiny slack so factor=1 reliably includes ties under float weights
    cutoff = factor * cstar * (1.0 + 1e-12) + 1e-12
    return [Cut(_mask_side(int(i), g.n), float(values[i]))
            for i in np.flatnonzero(values <= cutoff) if i > 0]


def _default_stream_config(cfg: MinCutPipelineConfig, n: int,
                           m: int) -> StreamPipelineConfig:
    """Split the error budget evenly between the online front-end and the
    tower, then spread the tower's share across its expected height."""
    part = math.sqrt(1.0 + cfg.eps) - 1.0
    height = max(1, math.ceil(math.log2(max(m / cfg.block_size, 1))) + 1)
    eps_lvl = eps_per_level(part, height)
    rho = 4.0 * math.log(max(m, 2)) / (eps_lvl * eps_lvl)
    return StreamPipelineConfig(
        online=OnlineConfig(eps=part, seed=cfg.seed),
        tree=TreeConfig(block_size=cfg.block_size, eps_prime=eps_lvl,
                        seed=cfg.seed, rho=rho),
        m_hint=m)


def stream_mincut(g: Graph, cfg: MinCutPipelineConfig = MinCutPipelineConfig()) -> float:
    """(1 + eps)-approximate global min cut of a streamed edge list."""
    if g.n > _ENUMERATE_MAX:
        raise CapabilityError(
            f"stream_mincut's enumeration stage supports n <= {_ENUMERATE_MAX}")
    stream_cfg = cfg.stream or _default_stream_config(cfg, g.n, g.m)
    sparsifier = stream_sparsify(g, stream_cfg)
    near = enumerate_near_min_cuts(sparsifier, cfg.near_factor)
    return min(cut_value(sparsifier, c.side) for c in near)
