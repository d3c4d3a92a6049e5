"""Greedy balanced weight assignment over the clique of a hyperedge.

Splits a hyperedge's weight across its clique pairs so that the ratios
(leverage / weight) of all pairs agree up to a factor gamma, by repeatedly
shifting weight from the pair with the smallest ratio to the pair with the
largest. The spanning-tree potential of the augmented graph strictly
increases with every shift, which is what guarantees termination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .graph import Graph, SpectralSketch, WeightedEdge, laplacian, pseudo_inverse

if TYPE_CHECKING:
    from .hypergraph import Hyperedge


class BalanceError(RuntimeError):
    """Shift loop exceeded its iteration cap; carries the last assignment."""

    def __init__(self, assignment: "WeightAssignment"):
        super().__init__("balanced weight assignment did not converge")
        self.assignment = assignment


@dataclass(frozen=True)
class BalanceConfig:
    gamma: float = 2.0
    max_iters: int | None = None      # None -> 1e4 * number of pairs
    literal_recipient_cap: bool = False  # cap the shift by the recipient's weight

    def __post_init__(self):
        if self.gamma <= 1:
            raise ValueError("gamma must exceed 1")


@dataclass
class WeightAssignment:
    """Per-pair weights z_uv with sum z = w(e)."""

    pairs: list[tuple[int, int]]
    z: np.ndarray
    trace: list[np.ndarray] = field(default_factory=list)  # z after each shift

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {p: float(zi) for p, zi in zip(self.pairs, self.z)}


def clique_pairs(vertices) -> list[tuple[int, int]]:
    return list(itertools.combinations(sorted(vertices), 2))


def _pair_ratios(base_gram: np.ndarray, pairs: list[tuple[int, int]],
                 z: np.ndarray) -> np.ndarray:
    """q_uv = d_uv^T K^+ d_uv on the z-augmented Gram matrix K.

    The ratio tau/z of a pair equals this quadratic form for any z, which
    also covers pairs currently at z = 0.
    """
    K = base_gram.copy()
    for (u, v), zi in zip(pairs, z):
        K[u, u] += zi
        K[v, v] += zi
        K[u, v] -= zi
        K[v, u] -= zi
    Kp = pseudo_inverse(K)
    q = np.empty(len(pairs))
    for i, (u, v) in enumerate(pairs):
        q[i] = Kp[u, u] + Kp[v, v] - 2.0 * Kp[u, v]
    return q


def is_balanced(sketch: SpectralSketch | np.ndarray, e: "Hyperedge",
                z: np.ndarray | dict, gamma: float) -> bool:
    """gamma * min over positive-weight pairs of the ratio >= max over all."""
    base = sketch.gram if isinstance(sketch, SpectralSketch) else np.asarray(sketch)
    pairs = clique_pairs(e.vertices)
    if isinstance(z, dict):
        z = np.array([z[p] for p in pairs])
    q = _pair_ratios(base, pairs, z)
    positive = z > 0
    if not positive.any():
        return False
    return gamma * q[positive].min() >= q.max() * (1.0 - 1e-9)


def get_weight_assignment(sketch: SpectralSketch | np.ndarray, e: "Hyperedge",
                          cfg: BalanceConfig = BalanceConfig()) -> WeightAssignment:
    """Greedy most-violated-first weight shifting until gamma-balance holds.

    The shift amount is capped by the donor's remaining weight (keeps all
    weights non-negative and conserves the total); set literal_recipient_cap
    to reproduce the cap by the recipient's weight instead.
    """
    base = sketch.gram if isinstance(sketch, SpectralSketch) else np.asarray(sketch)
    pairs = clique_pairs(e.vertices)
    if len(pairs) == 1:
        return WeightAssignment(pairs, np.array([e.w]))
    z = np.full(len(pairs), e.w / len(pairs))
    out = WeightAssignment(pairs, z, trace=[z.copy()])
    max_iters = cfg.max_iters if cfg.max_iters is not None else 10_000 * len(pairs)
    for _ in range(max_iters):
        q = _pair_ratios(base, pairs, z)
        positive = z > 0
        qmin_idx = int(np.where(positive, q, np.inf).argmin())
        qmax_idx = int(q.argmax())
        if gamma_ok(q[qmax_idx], q[qmin_idx], cfg.gamma) or qmax_idx == qmin_idx:
            break
        cap_z = z[qmax_idx] if cfg.literal_recipient_cap else z[qmin_idx]
        lam = min(cap_z, (cfg.gamma - 1.0) / (2.0 * cfg.gamma * q[qmax_idx]))
        z[qmax_idx] += lam
        z[qmin_idx] = max(0.0, z[qmin_idx] - lam)
        out.trace.append(z.copy())
    else:
        raise BalanceError(out)
    # undo accumulated float drift
    z *= e.w / z.sum()
    out.z = z
    return out


def gamma_ok(qmax: float, qmin_pos: float, gamma: float) -> bool:
    return gamma * qmin_pos >= qmax * (1.0 - 1e-12)


def st_potential(g: Graph) -> float:
    """log of the weighted spanning-tree sum, by the matrix-tree theorem.

    Returns -inf for disconnected graphs (no spanning tree).
    """
    if g.n == 1:
        return 0.0
    L = laplacian(g)
    sign, logdet = np.linalg.slogdet(L[1:, 1:])
    if sign <= 0 or not math.isfinite(logdet):
        return -math.inf
    return float(logdet)


def augmented_graph(sketch: SpectralSketch, pairs: list[tuple[int, int]],
                    z: np.ndarray) -> Graph:
    """Sketch rows as weighted edges plus the positive-weight clique pairs;
    the graph whose spanning-tree potential the shift loop climbs."""
    edges = [WeightedEdge(r.u, r.v, r.scale ** 2) for r in sketch.rows]
    for (u, v), zi in zip(pairs, z):
        if zi > 0:
            edges.append(WeightedEdge(u, v, float(zi)))
    return Graph(sketch.n, edges)
