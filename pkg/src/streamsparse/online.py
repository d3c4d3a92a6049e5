"""Online row sampling with ridge-leverage probabilities.

Maintains a 2-approximate spectral sketch of the prefix incidence matrix and
keeps each arriving row with probability min(c * score, 1). The inverse of
(Gram + lam I) is maintained by rank-1 updates, so scoring a row is O(1) and
a kept row costs O(n^2).
"""

from __future__ import annotations

import math
from typing import Protocol

import numpy as np

from .graph import (Graph, IncidenceRow, SpectralSketch, WeightedEdge,
                    pseudo_inverse)
from .rng import UniformByIndex

_REFRESH_EVERY = 512


def default_c(m: int, eps: float = 1.0, alpha: float = 4.0) -> float:
    """Probability multiplier alpha * ln(max(m, 2)) / eps^2."""
    return alpha * math.log(max(m, 2)) / (eps * eps)


class SketchProvider(Protocol):
    """External source of the Gram matrix used for scoring. The provider
    must be a 2-approximation of the true prefix Gram matrix."""

    def gram(self) -> np.ndarray: ...

    @property
    def version(self) -> int: ...


class OnlineSamplerState:
    """Sequential single-owner sampling state.

    With provider=None the sampler scores against its own kept rows
    (self-sketch mode); otherwise scores come from the external provider.
    """

    def __init__(self, n: int, c: float, lam: float | None = None,
                 seed: int = 0, eps: float = 1.0,
                 provider: SketchProvider | None = None):
        if c <= 0:
            raise ValueError("c must be positive")
        self.n = n
        self.c = c
        self.eps = eps
        self.seed = seed
        self.sketch = SpectralSketch(n)
        self.provider = provider
        self.score_sum = 0.0
        self.kept_count = 0
        self.kept_edges: list[WeightedEdge] = []
        self._draws = UniformByIndex(seed)
        self._index = 0
        self._fixed_lam = lam
        self._w_min = math.inf
        self.lam = lam if lam is not None else 1.0
        self._inv: np.ndarray | None = None
        self._provider_version = -1
        self._updates_since_refresh = 0

    # -- sketch inverse bookkeeping ------------------------------------

    def _scoring_gram(self) -> np.ndarray:
        if self.provider is not None:
            return self.provider.gram()
        return self.sketch.gram

    def _refresh_inverse(self) -> None:
        G = self._scoring_gram()
        self._inv = np.linalg.inv(G + self.lam * np.eye(self.n))
        self._updates_since_refresh = 0

    def _inverse(self) -> np.ndarray:
        if self.provider is not None:
            ver = self.provider.version
            if ver != self._provider_version:
                # a single-row provider change folds in as a rank-1 update;
                # anything else (a rebuild, or several changes at once)
                # forces a full refresh
                delta = getattr(self.provider, "last_delta", None)
                rank1 = (self._inv is not None and delta is not None
                         and ver == self._provider_version + 1)
                self._provider_version = ver
                if rank1:
                    self._rank1_update(delta.u, delta.v, delta.w)
                else:
                    self._inv = None
        if self._inv is None:
            self._refresh_inverse()
        return self._inv

    def _maybe_shrink_lambda(self, w: float) -> None:
        if self._fixed_lam is not None:
            return
        if w < self._w_min:
            self._w_min = w
            self.lam = self.eps * self._w_min / (self.n * self.n)
            self._inv = None  # lambda moved; rebuild lazily

    def _rank1_update(self, u: int, v: int, t: float) -> None:
        """Fold t * (chi_u - chi_v)(chi_u - chi_v)^T into the inverse."""
        K = self._inverse()
        kd = K[:, u] - K[:, v]
        denom = 1.0 + t * (kd[u] - kd[v])
        K -= (t / denom) * np.outer(kd, kd)
        self._updates_since_refresh += 1
        if self._updates_since_refresh >= _REFRESH_EVERY:
            self._refresh_inverse()

    # -- public API ----------------------------------------------------

    def score(self, row: IncidenceRow) -> float:
        """Ridge leverage a^T (G + lam I)^{-1} a against the current sketch."""
        self._maybe_shrink_lambda(row.scale * row.scale)
        K = self._inverse()
        u, v, s = row
        return s * s * (K[u, u] + K[v, v] - 2.0 * K[u, v])

    def process_row(self, row: IncidenceRow) -> tuple[bool, IncidenceRow | None]:
        """Score, decide, and (in self-sketch mode) grow the sketch.

        Returns (kept, reweighted row). Decisions are keyed by
        (seed, arrival index).
        """
        ell = self.score(row)
        # raw ridge scores on fresh directions are unbounded (up to 2/lam);
        # the running total clamps at 1 to mirror true leverage scores
        self.score_sum += min(ell, 1.0)
        p = min(self.c * ell, 1.0)
        self.last_p = p
        idx = self._index
        self._index += 1
        kept = self._draws.uniform(idx) < p
        if not kept:
            return False, None
        reweighted = IncidenceRow(row.u, row.v, row.scale / math.sqrt(p))
        self.kept_count += 1
        self.kept_edges.append(WeightedEdge(row.u, row.v, row.scale ** 2 / p))
        if self.provider is None:
            self.sketch.append(reweighted)
            self._rank1_update(row.u, row.v, reweighted.scale ** 2)
        return True, reweighted

    def process_edge(self, e: WeightedEdge) -> tuple[bool, WeightedEdge | None]:
        kept, _ = self.process_row(IncidenceRow(e.u, e.v, math.sqrt(e.w)))
        if not kept:
            return False, None
        # reweight from the original weight, not the sqrt round-trip, so that
        # p = 1 keeps the edge bit-exact
        out = WeightedEdge(e.u, e.v, e.w / self.last_p)
        self.kept_edges[-1] = out
        return True, out

    def finalize(self) -> Graph:
        """Snapshot of the sampled reweighted edges, in arrival order.
        Non-destructive; valid at any point of the stream."""
        return Graph(self.n, list(self.kept_edges))


def online_sparsify(g: Graph, c: float | None = None, eps: float = 1.0,
                    alpha: float = 4.0, lam: float | None = None,
                    seed: int = 0) -> Graph:
    """One-shot convenience wrapper over OnlineSamplerState."""
    if c is None:
        c = default_c(g.m, eps, alpha)
    state = OnlineSamplerState(g.n, c, lam=lam, seed=seed, eps=eps)
    for e in g.edges:
        state.process_edge(e)
    return state.finalize()


def exact_online_leverages(g: Graph) -> np.ndarray:
    """Test oracle: exact online leverage of each edge against the full
    unsampled prefix (including the edge itself), via pseudoinversion."""
    out = np.empty(g.m)
    G = np.zeros((g.n, g.n))
    for i, (u, v, w) in enumerate(g.edges):
        G[u, u] += w
        G[v, v] += w
        G[u, v] -= w
        G[v, u] -= w
        Gp = pseudo_inverse(G)
        out[i] = w * (Gp[u, u] + Gp[v, v] - 2.0 * Gp[u, v])
    return out
