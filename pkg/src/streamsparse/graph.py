"""Weighted multigraphs, Laplacians, effective resistances, and the
generalized-eigenvalue error metric used throughout the package.

All dense linear algebra; intended for graphs with up to a few thousand
vertices. Vertices are 0-based contiguous integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


class WeightedEdge(NamedTuple):
    u: int
    v: int
    w: float


class IncidenceRow(NamedTuple):
    """A scaled incidence row: as a dense vector, scale * (chi_u - chi_v)."""

    u: int
    v: int
    scale: float

    def dense(self, n: int) -> np.ndarray:
        a = np.zeros(n)
        a[self.u] = self.scale
        a[self.v] = -self.scale
        return a


def edge_row(e: WeightedEdge) -> IncidenceRow:
    return IncidenceRow(e.u, e.v, math.sqrt(e.w))


@dataclass
class Graph:
    """Weighted multigraph; edge order is stream arrival order."""

    n: int
    edges: list[WeightedEdge] = field(default_factory=list)

    def __post_init__(self):
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"self-loop at vertex {e.u}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            if e.w <= 0:
                raise ValueError(f"non-positive weight in {e}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def add(self, u: int, v: int, w: float) -> None:
        e = WeightedEdge(u, v, float(w))
        if u == v or not (0 <= u < self.n and 0 <= v < self.n) or w <= 0:
            raise ValueError(f"bad edge {e}")
        self.edges.append(e)

    def total_weight(self) -> float:
        return sum(e.w for e in self.edges)


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for pseudoinverse solves.

    eig_tol is a relative cutoff: eigenvalues <= eig_tol * lambda_max are
    treated as zero. ridge_lambda is the ridge term for regularized scores.
    """

    eig_tol: float = 1e-10
    ridge_lambda: float = 0.0

    def __post_init__(self):
        if self.eig_tol <= 0:
            raise ValueError("eig_tol must be positive")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be non-negative")


DEFAULT_SOLVER = SolverConfig()


class DisconnectedError(ValueError):
    """Raised when a pair of vertices lies in different components (the
    effective resistance would be infinite)."""


class KernelMismatchError(ValueError):
    """Raised by the error metric when the approximation has energy outside
    the image of the reference Laplacian."""


def laplacian(g: Graph) -> np.ndarray:
    """Dense weighted Laplacian; multi-edges add up."""
    L = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        L[u, u] += w
        L[v, v] += w
        L[u, v] -= w
        L[v, u] -= w
    return L


def incidence_matrix(g: Graph) -> np.ndarray:
    """Rows sqrt(w)*(chi_u - chi_v) in arrival order; L = A^T A."""
    A = np.zeros((g.m, g.n))
    for i, e in enumerate(g.edges):
        A[i, e.u] = math.sqrt(e.w)
        A[i, e.v] = -math.sqrt(e.w)
    return A


def pseudo_solve(L: np.ndarray, b: np.ndarray, cfg: SolverConfig = DEFAULT_SOLVER) -> np.ndarray:
    """Solve L x = b in the least-squares sense via eigendecomposition.

    Eigenvalues below cfg.eig_tol relative to the largest are dropped; the
    result is orthogonal to the dropped eigenspace.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("L must be square")
    if not np.allclose(L, L.T, atol=1e-8 * (1.0 + np.abs(L).max())):
        raise ValueError("L must be symmetric")
    vals, vecs = np.linalg.eigh(L)
    lam_max = vals[-1] if len(vals) else 0.0
    if lam_max <= 0:
        return np.zeros_like(np.asarray(b, dtype=float))
    keep = vals > cfg.eig_tol * lam_max
    coeffs = vecs[:, keep].T @ b
    return vecs[:, keep] @ (coeffs / vals[keep])


def pseudo_inverse(L: np.ndarray, cfg: SolverConfig = DEFAULT_SOLVER) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the same cutoff as pseudo_solve."""
    vals, vecs = np.linalg.eigh(np.asarray(L, dtype=float))
    lam_max = vals[-1] if len(vals) else 0.0
    if lam_max <= 0:
        return np.zeros_like(L)
    keep = vals > cfg.eig_tol * lam_max
    return (vecs[:, keep] / vals[keep]) @ vecs[:, keep].T


def effective_resistance(g: Graph, u: int, v: int, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """(chi_u - chi_v) L^+ (chi_u - chi_v)^T on g's Laplacian.

    Raises DisconnectedError if u and v are in different components.
    """
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("vertex out of range")
    if u == v:
        return 0.0
    L = laplacian(g)
    return resistance_from_laplacian(L, u, v, cfg)


def resistance_from_laplacian(L: np.ndarray, u: int, v: int,
                              cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    d = np.zeros(L.shape[0])
    d[u], d[v] = 1.0, -1.0
    x = pseudo_solve(L, d, cfg)
    # residual outside the image means u,v straddle components
    resid = L @ x - d
    if np.linalg.norm(resid) > 1e-6 * max(1.0, np.linalg.norm(d)):
        raise DisconnectedError(f"vertices {u} and {v} are not connected")
    return float(d @ x)


def leverage(g: Graph, e: WeightedEdge, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Leverage score of the incidence row of e: w(e) * effective resistance."""
    return e.w * effective_resistance(g, e.u, e.v, cfg)


def leverages(g: Graph, cfg: SolverConfig = DEFAULT_SOLVER) -> np.ndarray:
    """Leverage scores of all edges against the full graph, one solve."""
    if g.m == 0:
        return np.zeros(0)
    Lp = pseudo_inverse(laplacian(g), cfg)
    out = np.empty(g.m)
    for i, (u, v, w) in enumerate(g.edges):
        out[i] = w * (Lp[u, u] + Lp[v, v] - 2.0 * Lp[u, v])
    return out


class SpectralSketch:
    """A running set of reweighted incidence rows; the Gram matrix of the
    rows approximates a Laplacian and drives sampling probabilities."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[IncidenceRow] = []
        self._gram = np.zeros((n, n))

    def append(self, row: IncidenceRow) -> None:
        if row.scale <= 0:
            raise ValueError("row scale must be positive")
        self.rows.append(row)
        u, v, s = row
        w = s * s
        self._gram[u, u] += w
        self._gram[v, v] += w
        self._gram[u, v] -= w
        self._gram[v, u] -= w

    @property
    def gram(self) -> np.ndarray:
        """Symmetric PSD Gram matrix M^T M (ones vector in its kernel)."""
        return self._gram

    def __len__(self) -> int:
        return len(self.rows)


def ridge_leverage(sketch: SpectralSketch, row: IncidenceRow, lam: float,
                   cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """a^T (M^T M + lam I)^{-1} a for the dense vector a of row.

    lam = 0 falls back to the pseudoinverse and requires a to lie in the
    image of the Gram matrix.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    a = row.dense(sketch.n)
    G = sketch.gram
    if lam > 0:
        x = np.linalg.solve(G + lam * np.eye(sketch.n), a)
        return float(a @ x)
    x = pseudo_solve(G, a, cfg)
    resid = G @ x - a
    if np.linalg.norm(resid) > 1e-6 * np.linalg.norm(a):
        raise DisconnectedError(
            "lam = 0 requires the row to lie in the image of the sketch")
    return float(a @ x)


def rayleigh_error(L: np.ndarray, L_hat: np.ndarray,
                   cfg: SolverConfig = DEFAULT_SOLVER, two_sided: bool = True) -> float:
    """Multiplicative sparsifier error: the extreme generalized eigenvalue of
    the pencil (L - L_hat, L) restricted to image(L).

    two_sided=True (default) returns the largest magnitude; False returns the
    largest (signed) eigenvalue only.
    """
    L = np.asarray(L, dtype=float)
    L_hat = np.asarray(L_hat, dtype=float)
    vals, vecs = np.linalg.eigh(L)
    lam_max = vals[-1] if len(vals) else 0.0
    if lam_max <= 0:
        if np.abs(L_hat).max(initial=0.0) > 1e-12:
            raise KernelMismatchError("reference Laplacian is zero but L_hat is not")
        return 0.0
    keep = vals > cfg.eig_tol * lam_max
    V = vecs[:, keep]
    # image(L_hat) must sit inside image(L)
    drop = vecs[:, ~keep]
    if drop.shape[1]:
        spill = np.linalg.norm(drop.T @ L_hat @ drop)
        if spill > 1e-8 * lam_max:
            raise KernelMismatchError("approximation has energy outside image(L)")
    scale = 1.0 / np.sqrt(vals[keep])
    D = (V * scale).T @ (L - L_hat) @ (V * scale)
    ev = np.linalg.eigvalsh((D + D.T) / 2.0)
    if two_sided:
        return float(np.abs(ev).max())
    return float(ev.max())
