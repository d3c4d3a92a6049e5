"""Merge-and-reduce coreset tower and the full streaming pipeline.

The tower is a binary counter of coresets: the level-0 buffer collects raw
items; a full buffer becomes a level-1 block, and whenever two coresets meet
at a level they are merged and reduced (effective-resistance sampling) into
the next level. The union of all levels plus the buffer is a sparsifier of
everything pushed so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, WeightedEdge
from .offline import OfflineSampleConfig, er_sparsify
from .online import OnlineSamplerState, default_c
from .rng import spawn_seed


@dataclass(frozen=True)
class TreeConfig:
    block_size: int
    eps_prime: float = 0.1
    seed: int = 0
    rho: float | None = None      # None -> block_size / n per merge
    identity_reducer: bool = False

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")


def eps_per_level(eps: float, height: int) -> float:
    """Per-level accuracy so that (1 + eps') ** height <= 1 + eps."""
    if height <= 1:
        return eps
    return math.expm1(math.log1p(eps) / height)


class MergeReduceTree:
    """Logarithmic tower of coresets over a stream of weighted edges."""

    def __init__(self, n: int, cfg: TreeConfig):
        self.n = n
        self.cfg = cfg
        self.buffer: list[WeightedEdge] = []
        self.levels: list[list[WeightedEdge] | None] = []
        self.pushed = 0
        self.merges = 0
        self.peak_resident = 0
        self.version = 0            # bumped on every gram change (for sketch users)
        self.last_delta: WeightedEdge | None = None   # set when the change was one push
        self._gram = np.zeros((n, n))

    # -- resident accounting -------------------------------------------

    def resident(self) -> int:
        return len(self.buffer) + sum(len(c) for c in self.levels if c)

    def _note_peak(self, extra: int = 0) -> None:
        self.peak_resident = max(self.peak_resident, self.resident() + extra)

    # -- sketch provider interface -------------------------------------

    def gram(self) -> np.ndarray:
        """Gram matrix of the current sparsifier's incidence rows."""
        return self._gram

    def _rebuild_gram(self) -> None:
        G = np.zeros((self.n, self.n))
        for e in self._iter_items():
            G[e.u, e.u] += e.w
            G[e.v, e.v] += e.w
            G[e.u, e.v] -= e.w
            G[e.v, e.u] -= e.w
        self._gram = G

    def _gram_add(self, e: WeightedEdge) -> None:
        G = self._gram
        G[e.u, e.u] += e.w
        G[e.v, e.v] += e.w
        G[e.u, e.v] -= e.w
        G[e.v, e.u] -= e.w

    # -- tower mechanics -----------------------------------------------

    def _reduce(self, items: list[WeightedEdge]) -> list[WeightedEdge]:
        if self.cfg.identity_reducer:
            return items
        rho = self.cfg.rho if self.cfg.rho is not None else self.cfg.block_size / self.n
        seed = spawn_seed(self.cfg.seed, self.merges)
        self.merges += 1
        return er_sparsify(Graph(self.n, items), OfflineSampleConfig(rho, seed)).edges

    def push(self, item: WeightedEdge) -> None:
        self.buffer.append(item)
        self.pushed += 1
        self._gram_add(item)
        self.version += 1
        self.last_delta = item
        self._note_peak()
        if len(self.buffer) >= self.cfg.block_size:
            block = self.buffer
            self.buffer = []
            self._carry(block)

    def _carry(self, coreset: list[WeightedEdge]) -> None:
        lvl = 0
        while True:
            if lvl >= len(self.levels):
                self.levels.append(None)
            if self.levels[lvl] is None:
                self.levels[lvl] = coreset
                break
            merged = self.levels[lvl] + coreset
            self.levels[lvl] = None
            self._note_peak(extra=len(merged) - len(coreset))
            coreset = self._reduce(merged)
            lvl += 1
        self.version += 1
        self.last_delta = None
        self._rebuild_gram()
        self._note_peak()

    def _iter_items(self):
        for c in reversed(self.levels):
            if c:
                yield from c
        yield from self.buffer

    def sparsifier(self) -> Graph:
        """Union of all level coresets and the buffer (oldest levels first)."""
        return Graph(self.n, list(self._iter_items()))

    @property
    def height(self) -> int:
        return len(self.levels)


def mr_sparsify(g: Graph, cfg: TreeConfig) -> tuple[Graph, MergeReduceTree]:
    """Run the tower over a whole edge list."""
    tree = MergeReduceTree(g.n, cfg)
    for e in g.edges:
        tree.push(e)
    return tree.sparsifier(), tree


# -- full streaming pipeline -------------------------------------------


@dataclass(frozen=True)
class OnlineConfig:
    c: float | None = None        # None -> default_c(m_hint, eps, alpha)
    eps: float = 1.0
    alpha: float = 4.0
    lam: float | None = None
    seed: int = 0


@dataclass
class StreamPipelineConfig:
    online: OnlineConfig = field(default_factory=OnlineConfig)
    tree: TreeConfig = field(default_factory=lambda: TreeConfig(block_size=256))
    budget: int | None = None
    use_tree_sketch: bool = False   # working-memory mode: tree output = sketch
    m_hint: int | None = None       # expected stream length, for default c


class StreamSparsifier:
    """Online front-end feeding the merge-and-reduce tower."""

    def __init__(self, n: int, cfg: StreamPipelineConfig):
        self.n = n
        self.cfg = cfg
        c = cfg.online.c
        if c is None:
            c = default_c(cfg.m_hint or 1024, cfg.online.eps, cfg.online.alpha)
        self.tree = MergeReduceTree(n, cfg.tree)
        provider = self.tree if cfg.use_tree_sketch else None
        self.sampler = OnlineSamplerState(
            n, c, lam=cfg.online.lam, seed=cfg.online.seed,
            eps=cfg.online.eps, provider=provider)
        self.max_resident = 0

    def push(self, e: WeightedEdge) -> None:
        kept, reweighted = self.sampler.process_edge(e)
        if kept:
            self.tree.push(reweighted)
        resident = self.tree.resident()
        if not self.cfg.use_tree_sketch:
            resident += len(self.sampler.sketch)
        self.max_resident = max(self.max_resident, resident,
                                self.tree.peak_resident)

    def result(self) -> Graph:
        return self.tree.sparsifier()


def stream_sparsify(g: Graph, cfg: StreamPipelineConfig) -> Graph:
    if cfg.m_hint is None:
        cfg.m_hint = g.m
    pipe = StreamSparsifier(g.n, cfg)
    for e in g.edges:
        pipe.push(e)
    return pipe.result()
