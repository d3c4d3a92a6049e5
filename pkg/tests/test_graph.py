"""Core Laplacian machinery: solves, resistances, leverage, error metric."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from streamsparse import (DisconnectedError, Graph, IncidenceRow,
                          KernelMismatchError, SpectralSketch, WeightedEdge,
                          effective_resistance, incidence_matrix, laplacian,
                          leverage, leverages, pseudo_inverse, pseudo_solve,
                          rayleigh_error, ridge_leverage)


def triangle(w=1.0):
    return Graph(3, [WeightedEdge(0, 1, w), WeightedEdge(1, 2, w),
                     WeightedEdge(0, 2, w)])


def path(n, w=1.0):
    return Graph(n, [WeightedEdge(i, i + 1, w) for i in range(n - 1)])


def random_connected(rng, n, extra=5):
    """Random tree plus `extra` random extra edges; always connected."""
    edges = [WeightedEdge(int(rng.integers(0, i)), i, float(rng.uniform(0.5, 3)))
             for i in range(1, n)]
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append(WeightedEdge(int(u), int(v), float(rng.uniform(0.5, 3))))
    return Graph(n, edges)


class TestLaplacian:
    def test_single_edge(self):
        g = Graph(2, [WeightedEdge(0, 1, 3.0)])
        assert np.array_equal(laplacian(g), [[3.0, -3.0], [-3.0, 3.0]])

    def test_rows_sum_to_zero(self):
        rng = np.random.default_rng(0)
        g = random_connected(rng, 8)
        assert np.allclose(laplacian(g).sum(axis=1), 0.0)

    def test_incidence_gram_is_laplacian(self):
        rng = np.random.default_rng(1)
        g = random_connected(rng, 7)
        B = incidence_matrix(g)
        assert np.allclose(B.T @ B, laplacian(g))


class TestPseudoSolve:
    def test_unit_edge_potentials(self):
        # one unit edge, unit current: potentials (0.5, -0.5)
        g = Graph(2, [WeightedEdge(0, 1, 1.0)])
        x = pseudo_solve(laplacian(g), np.array([1.0, -1.0]))
        assert np.allclose(x, [0.5, -0.5])

    def test_projects_out_kernel(self):
        g = triangle()
        x = pseudo_solve(laplacian(g), np.array([1.0, -1.0, 0.0]))
        assert abs(x.sum()) < 1e-12

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            pseudo_solve(np.array([[1.0, 2.0], [0.0, 1.0]]), np.ones(2))


class TestEffectiveResistance:
    def test_triangle_two_thirds(self):
        assert effective_resistance(triangle(), 0, 1) == pytest.approx(2 / 3, abs=1e-12)

    def test_path_resistances_add(self):
        # series circuit: r(0, k) = k for unit path
        g = path(5)
        for k in range(1, 5):
            assert effective_resistance(g, 0, k) == pytest.approx(k, abs=1e-9)

    def test_parallel_edges_halve(self):
        g = Graph(2, [WeightedEdge(0, 1, 1.0), WeightedEdge(0, 1, 1.0)])
        assert effective_resistance(g, 0, 1) == pytest.approx(0.5, abs=1e-12)

    def test_disconnected_raises(self):
        g = Graph(4, [WeightedEdge(0, 1, 1.0), WeightedEdge(2, 3, 1.0)])
        with pytest.raises(DisconnectedError):
            effective_resistance(g, 0, 2)

    def test_same_vertex_zero(self):
        assert effective_resistance(triangle(), 1, 1) == 0.0


class TestLeverage:
    def test_bridge_has_leverage_one(self):
        g = path(4)
        for e in g.edges:
            assert leverage(g, e) == pytest.approx(1.0, abs=1e-12)

    def test_sum_is_rank(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            g = random_connected(rng, 9)
            assert leverages(g).sum() == pytest.approx(g.n - 1, abs=1e-8)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=30, deadline=None)
    def test_sum_is_rank_property(self, seed):
        rng = np.random.default_rng(seed)
        g = random_connected(rng, int(rng.integers(3, 10)))
        assert leverages(g).sum() == pytest.approx(g.n - 1, abs=1e-8)

    def test_matches_per_edge_leverage(self):
        rng = np.random.default_rng(5)
        g = random_connected(rng, 6)
        all_levs = leverages(g)
        for i, e in enumerate(g.edges):
            assert all_levs[i] == pytest.approx(leverage(g, e), abs=1e-10)


class TestSketchAndRidge:
    def test_gram_matches_laplacian(self):
        rng = np.random.default_rng(3)
        g = random_connected(rng, 6)
        sk = SpectralSketch(6)
        for u, v, w in g.edges:
            sk.append(IncidenceRow(u, v, math.sqrt(w)))
        assert np.allclose(sk.gram, laplacian(g))

    def test_identical_rows_harmonic(self):
        # k identical unit rows: ridge-free leverage of the row is 1/k * 2/2
        sk = SpectralSketch(2)
        for _ in range(4):
            sk.append(IncidenceRow(0, 1, 1.0))
        assert ridge_leverage(sk, IncidenceRow(0, 1, 1.0), 0.0) == pytest.approx(0.25)

    def test_lambda_monotone(self):
        sk = SpectralSketch(3)
        sk.append(IncidenceRow(0, 1, 1.0))
        sk.append(IncidenceRow(1, 2, 1.0))
        row = IncidenceRow(0, 2, 1.0)
        vals = [ridge_leverage(sk, row, lam) for lam in (1e-6, 1e-3, 1.0)]
        assert vals[0] > vals[1] > vals[2]

    def test_zero_lambda_out_of_image_raises(self):
        sk = SpectralSketch(3)
        sk.append(IncidenceRow(0, 1, 1.0))
        with pytest.raises(DisconnectedError):
            ridge_leverage(sk, IncidenceRow(1, 2, 1.0), 0.0)


class TestRayleighError:
    def test_exact_copy_zero(self):
        g = triangle()
        assert rayleigh_error(laplacian(g), laplacian(g)) == pytest.approx(0.0, abs=1e-10)

    def test_uniform_scaling(self):
        g = triangle()
        L = laplacian(g)
        assert rayleigh_error(L, 1.25 * L) == pytest.approx(0.25, abs=1e-9)
        assert rayleigh_error(L, 0.75 * L) == pytest.approx(0.25, abs=1e-9)

    def test_one_sided_signs(self):
        g = triangle()
        L = laplacian(g)
        # L - 1.25 L is negative definite on the image: signed max is negative
        assert rayleigh_error(L, 1.25 * L, two_sided=False) == pytest.approx(-0.25, abs=1e-9)

    def test_dropped_edge_scores_one(self):
        # a sparsifier missing all weight across some cut has error exactly 1
        g = path(3)
        missing = Graph(3, [WeightedEdge(0, 1, 1.0)])
        assert rayleigh_error(laplacian(g), laplacian(missing)) == pytest.approx(1.0, abs=1e-9)

    def test_kernel_mismatch(self):
        # the approximation spends energy outside the reference image
        ref = Graph(3, [WeightedEdge(0, 1, 1.0)])
        overreach = path(3)
        with pytest.raises(KernelMismatchError):
            rayleigh_error(laplacian(ref), laplacian(overreach))

    def test_bound_matches_quadratic_forms(self):
        rng = np.random.default_rng(11)
        g = random_connected(rng, 8)
        h = Graph(8, [WeightedEdge(e.u, e.v, e.w * float(rng.uniform(0.8, 1.2)))
                      for e in g.edges])
        err = rayleigh_error(laplacian(g), laplacian(h))
        L, Lh = laplacian(g), laplacian(h)
        for _ in range(50):
            x = rng.standard_normal(8)
            x -= x.mean()
            q = x @ L @ x
            assert abs(x @ Lh @ x - q) <= (err + 1e-9) * q
