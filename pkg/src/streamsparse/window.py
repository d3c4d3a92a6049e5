"""Sliding-window sparsification over a reversed-stream coreset tower.

New items are prepended to a raw buffer, so every stored level reads most
recent first. When the buffer fills, everything below the first empty level
is run through the online hyperedge sampler as one synthetic stream and the
result parked at that level. Because online coresets are valid on every
prefix and the stream is reversed, any suffix window of the original stream
can be answered by filtering stored items on their original index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .hypergraph import (Hyperedge, Hypergraph, HyperSamplerConfig,
                         HyperSamplerState, fast_rho)
from .rng import spawn_seed


class StoredItem(NamedTuple):
    edge: Hyperedge       # original weight, never mutated
    index: int            # arrival index in the outer stream
    factor: float         # accumulated 1/p reweighting


@dataclass(frozen=True)
class SlidingWindowConfig:
    block_size: int                  # M: raw buffer capacity
    eps: float = 0.5
    seed: int = 0
    rho: float | None = None         # None -> fast-variant default per carry
    beta: float = 0.5
    identity_coreset: bool = False   # keep everything (exact mode, for tests)

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")


class SlidingWindowState:
    """Single-owner sequential state; queries are read-only."""

    def __init__(self, n: int, cfg: SlidingWindowConfig):
        self.n = n
        self.cfg = cfg
        self.buffer: list[StoredItem] = []           # reverse arrival order
        self.levels: list[list[StoredItem] | None] = []
        self.last_index: int | None = None
        self.carries = 0

    def stored(self) -> int:
        return len(self.buffer) + sum(len(c) for c in self.levels if c)

    # -- coreset subroutine --------------------------------------------

    def _coreset(self, items: list[StoredItem]) -> list[StoredItem]:
        if self.cfg.identity_coreset:
            return list(items)
        rho = self.cfg.rho
        if rho is None:
            r = max(it.edge.size for it in items)
            rho = fast_rho(r, len(items), self.cfg.eps, beta=self.cfg.beta)
        rows = sum(it.edge.size * (it.edge.size - 1) // 2 for it in items)
        seed = spawn_seed(self.cfg.seed, self.carries)
        state = HyperSamplerState(self.n, HyperSamplerConfig(
            rho=rho, eps=self.cfg.eps, seed=seed, m_hint=max(rows, 2)))
        out: list[StoredItem] = []
        for it in items:
            effective = Hyperedge(it.edge.vertices, it.edge.w * it.factor)
            decision = state.step(effective)
            if decision.kept:
                out.append(StoredItem(it.edge, it.index,
                                      it.factor / decision.p))
        return out

    # -- push / query ---------------------------------------------------

    def push(self, item: Hyperedge, t: int | None = None) -> None:
        if t is None:
            t = 0 if self.last_index is None else self.last_index + 1
        if self.last_index is not None and t <= self.last_index:
            raise ValueError("stream indices must be strictly increasing")
        self.last_index = t
        if len(self.buffer) < self.cfg.block_size:
            self.buffer.insert(0, StoredItem(item, t, 1.0))
            return
        # buffer is full: compact everything below the first empty level
        stream = list(self.buffer)
        lvl = 0
        while lvl < len(self.levels) and self.levels[lvl] is not None:
            stream.extend(self.levels[lvl])
            self.levels[lvl] = None
            lvl += 1
        if lvl >= len(self.levels):
            self.levels.append(None)
        self.levels[lvl] = self._coreset(stream)
        self.carries += 1
        self.buffer = [StoredItem(item, t, 1.0)]

    def query(self, window: int, literal_union: bool = False) -> Hypergraph:
        """Sparsifier of the last `window` items, in original arrival order.

        literal_union skips index filtering and returns every stored item
        (valid for windows aligned to whole levels, larger otherwise).
        """
        if window < 1:
            raise ValueError("window must be >= 1")
        items = list(self.buffer)
        for c in self.levels:
            if c:
                items.extend(c)
        if not literal_union and self.last_index is not None:
            low = self.last_index - window + 1
            items = [it for it in items if it.index >= low]
        items.sort(key=lambda it: it.index)
        out = Hypergraph(self.n)
        for it in items:
            out.add(Hyperedge(it.edge.vertices, it.edge.w * it.factor))
        return out


def sw_push(state: SlidingWindowState, item: Hyperedge,
            t: int | None = None) -> None:
    state.push(item, t)


def sw_query(state: SlidingWindowState, window: int,
             literal_union: bool = False) -> Hypergraph:
    return state.query(window, literal_union)
