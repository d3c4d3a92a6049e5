"""Adversarially robust wrappers with lazy eigenvalue-gated switching.

The exposed sparsifier only changes when some Laplacian eigenvalue of the
inner snapshot has grown past a (1 + eps/8) gate since the last switch, so
an adaptive adversary observing the output learns nothing between switches.
The hypergraph variant gates on the associated graph and swaps the exposed
hypergraph exactly when the graph gate trips.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .balance import clique_pairs
from .graph import Graph, WeightedEdge, laplacian, rayleigh_error, KernelMismatchError
from .hypergraph import (Hyperedge, Hypergraph, HyperSamplerConfig,
                         HyperSamplerState, fast_rho)
from .online import OnlineSamplerState, default_c
from .rng import spawn_seed

_ZERO_TOL = 1e-9   # relative floor below which an eigenvalue counts as zero


class RobustWrapperState:
    """Graph stream wrapper. The inner sampler runs at eps/8; the exposed
    snapshot is refreshed only at gate events."""

    def __init__(self, n: int, eps: float, m_hint: int = 1024, seed: int = 0,
                 inner: OnlineSamplerState | None = None,
                 gate: float | None = None):
        if not 0 < eps < 8:
            raise ValueError("eps must be in (0, 8)")
        self.n = n
        self.eps = eps
        self.gate = gate if gate is not None else 1.0 + eps / 8.0
        if inner is None:
            inner_eps = eps / 8.0
            inner = OnlineSamplerState(n, default_c(m_hint, inner_eps),
                                       eps=inner_eps, seed=seed)
        self.inner = inner
        self.exposed = Graph(n, [])
        self.baseline = np.zeros(n)       # sorted eigenvalues at last switch
        self.switch_count = 0

    def _within_gate(self, eigs: np.ndarray) -> bool:
        scale = max(float(eigs.max(initial=0.0)),
                    float(self.baseline.max(initial=0.0)), 1.0)
        floor = _ZERO_TOL * scale
        for new, base in zip(eigs, self.baseline):
            if base <= floor:
                if new > floor:
                    return False        # zero -> nonzero counts as a violation
                continue
            ratio = new / base
            if ratio > self.gate or ratio < 1.0 / self.gate:
                return False
        return True

    def step(self, e: WeightedEdge) -> Graph:
        self.inner.process_edge(e)
        snapshot = self.inner.finalize()
        eigs = np.sort(np.linalg.eigvalsh(laplacian(snapshot)))
        if not self._within_gate(eigs):
            self.exposed = snapshot
            self.baseline = eigs
            self.switch_count += 1
        return self.exposed


def robust_step(state: RobustWrapperState, e: WeightedEdge) -> Graph:
    return state.step(e)


class RobustHyperWrapperState:
    """Hypergraph wrapper: a graph wrapper over the associated-graph stream
    at eps/(8 r^2) decides the switch times; a separate hypergraph sampler
    at eps/8 supplies the snapshots."""

    def __init__(self, n: int, eps: float, r: int, m_hint: int = 1024,
                 seed: int = 0, rho: float | None = None):
        self.n = n
        self.eps = eps
        eps_graph = eps / (8.0 * r * r)
        row_hint = max(m_hint * r * (r - 1) // 2, 2)
        self.graph_wrapper = RobustWrapperState(
            n, eps_graph, m_hint=row_hint, seed=spawn_seed(seed, 0))
        inner_eps = eps / 8.0
        if rho is None:
            rho = fast_rho(r, m_hint, inner_eps)
        self.sampler = HyperSamplerState(n, HyperSamplerConfig(
            rho=rho, eps=inner_eps, seed=spawn_seed(seed, 1),
            m_hint=row_hint))
        self.exposed = Hypergraph(n)
        self.switch_count = 0

    def step(self, e: Hyperedge) -> Hypergraph:
        switched = False
        before = self.graph_wrapper.switch_count
        for u, v in clique_pairs(e.vertices):
            self.graph_wrapper.step(WeightedEdge(u, v, e.w))
        switched = self.graph_wrapper.switch_count > before
        self.sampler.step(e)
        if switched:
            self.exposed = self.sampler.sparsifier()
            self.switch_count += 1
        return self.exposed


def robust_hyper_step(state: RobustHyperWrapperState, e: Hyperedge) -> Hypergraph:
    return state.step(e)


# -- adversary game harness ---------------------------------------------


@dataclass(frozen=True)
class AdversaryScript:
    """Deterministic adaptive adversary: strategy(history, round) -> edge,
    where history is the list of exposed outputs so far."""

    strategy: Callable[[list[Graph], int], WeightedEdge]
    rounds: int
    seed: int = 0


@dataclass
class TranscriptRecord:
    round: int
    edge: tuple
    switched: bool
    error: float
    valid: bool


@dataclass
class Transcript:
    records: list[TranscriptRecord] = field(default_factory=list)
    switch_count: int = 0

    def save(self, path) -> None:
        with open(path, "w") as fh:
            for r in self.records:
                fh.write(json.dumps({
                    "round": r.round, "edge": list(r.edge),
                    "switch": r.switched, "error": r.error,
                    "valid": r.valid}) + "\n")


def play_game(adversary: AdversaryScript, state: RobustWrapperState,
              eps: float | None = None) -> Transcript:
    """Drive the two-player loop and check the exposed output against the
    exact prefix Laplacian every round."""
    eps = eps if eps is not None else state.eps
    transcript = Transcript()
    history: list[Graph] = []
    prefix = Graph(state.n, [])
    for t in range(adversary.rounds):
        e = adversary.strategy(history, t)
        prefix.add(e.u, e.v, e.w)
        before = state.switch_count
        exposed = state.step(e)
        history.append(exposed)
        try:
            err = rayleigh_error(laplacian(prefix), laplacian(exposed))
        except KernelMismatchError:
            err = math.inf
        transcript.records.append(TranscriptRecord(
            round=t, edge=(e.u, e.v, e.w),
            switched=state.switch_count > before,
            error=float(err), valid=bool(err <= eps)))
    transcript.switch_count = state.switch_count
    return transcript
