"""Threshold graph construction and the exact clique solver."""

from fractions import Fraction

import numpy as np
import pytest

from freqset.errors import BudgetExceeded, EmptyGraph, InvalidThreshold, InvalidVertex
from freqset.graph import (
    CliqueResult,
    ExactCliqueSolver,
    ThresholdGraph,
    exact_threshold,
    is_clique,
    max_clique_exact,
    threshold_graph,
)

from conftest import max_clique_size_bruteforce, random_matrix


def complete_graph(k: int) -> ThresholdGraph:
    return ThresholdGraph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


class TestExactThreshold:
    def test_floats_convert_exactly(self):
        assert exact_threshold(0.4375) == Fraction(7, 16)
        assert exact_threshold(0.5) == Fraction(1, 2)

    def test_fractions_pass_through(self):
        assert exact_threshold(Fraction(3, 7)) == Fraction(3, 7)

    def test_bounds_enforced(self):
        with pytest.raises(InvalidThreshold):
            exact_threshold(-0.1)
        with pytest.raises(InvalidThreshold):
            exact_threshold(1.5)
        with pytest.raises(InvalidThreshold):
            exact_threshold(float("nan"))
        with pytest.raises(InvalidThreshold):
            exact_threshold(float("inf"))


class TestThresholdGraph:
    def test_small_db_graph_at_three_sevenths(self, small_matrix):
        g = threshold_graph(small_matrix, Fraction(3, 7))
        # pairs with count >= 3 of 7: ids (0,1), (0,3), (1,3), (1,2)
        kept = {(i, j) for i in range(4) for j in range(i + 1, 4) if g.has_edge(i, j)}
        assert kept == {(0, 1), (0, 3), (1, 3), (1, 2)}

    def test_edge_boundary_is_inclusive(self, small_matrix):
        # count(0,2) = 2, so rel = 2/7 keeps the edge at exactly 2/7
        assert threshold_graph(small_matrix, Fraction(2, 7)).has_edge(0, 2)
        assert not threshold_graph(small_matrix, Fraction(2, 7) + Fraction(1, 10**9)).has_edge(0, 2)

    def test_zero_threshold_gives_complete_graph(self, small_matrix):
        g = threshold_graph(small_matrix, 0)
        assert g.edge_count() == 6

    def test_edges_shrink_as_threshold_grows(self):
        rng = np.random.default_rng(99)
        for _ in range(10):
            k = int(rng.integers(2, 15))
            matrix = random_matrix(rng, k, int(rng.integers(1, 50)))
            thresholds = sorted(rng.random(4))
            edge_counts = [threshold_graph(matrix, t).edge_count() for t in thresholds]
            assert edge_counts == sorted(edge_counts, reverse=True)

    def test_vertex_bounds_checked(self):
        g = complete_graph(3)
        with pytest.raises(InvalidVertex):
            g.has_edge(0, 3)
        with pytest.raises(InvalidVertex):
            g.neighbors_mask(-1)


class TestIsClique:
    def test_complete_graph_subsets(self):
        g = complete_graph(5)
        assert is_clique(g, [0, 2, 4])
        assert is_clique(g, range(5))

    def test_small_sets_always_qualify(self):
        g = ThresholdGraph.from_edges(4, [])
        assert is_clique(g, [])
        assert is_clique(g, [2])

    def test_missing_edge_detected(self, small_matrix):
        g = threshold_graph(small_matrix, Fraction(3, 7))
        assert is_clique(g, [0, 1, 3])
        assert not is_clique(g, [0, 1, 2])

    def test_out_of_range_vertex_rejected(self):
        g = complete_graph(3)
        with pytest.raises(InvalidVertex):
            is_clique(g, [0, 7])


class TestMaxCliqueExact:
    def test_complete_graph(self):
        result = max_clique_exact(complete_graph(6))
        assert result.vertices == (0, 1, 2, 3, 4, 5)
        assert result.size == 6

    def test_edgeless_graph_yields_single_vertex(self):
        result = max_clique_exact(ThresholdGraph.from_edges(4, []))
        assert result.vertices == (0,)

    def test_small_db_graph(self, small_matrix):
        g = threshold_graph(small_matrix, Fraction(3, 7))
        assert max_clique_exact(g).vertices == (0, 1, 3)

    def test_empty_graph_rejected(self):
        with pytest.raises(EmptyGraph):
            max_clique_exact(ThresholdGraph(0, []))

    def test_lexicographic_tie_break(self):
        # two disjoint triangles; both are maximum
        g = ThresholdGraph.from_edges(6, [(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)])
        assert max_clique_exact(g).vertices == (0, 2, 4)
        # two disjoint edges; {0,3} beats {1,2} lexicographically
        g2 = ThresholdGraph.from_edges(4, [(1, 2), (0, 3)])
        assert max_clique_exact(g2).vertices == (0, 3)

    def test_matches_bruteforce_on_random_graphs(self):
        rng = np.random.default_rng(2024)
        for _ in range(60):
            k = int(rng.integers(1, 15))
            p = float(rng.uniform(0.1, 0.9))
            edges = [
                (i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < p
            ]
            g = ThresholdGraph.from_edges(k, edges)
            result = max_clique_exact(g)
            assert is_clique(g, result.vertices)
            assert result.size == max_clique_size_bruteforce(g)

    def test_matches_bruteforce_on_larger_sparse_and_dense_graphs(self):
        rng = np.random.default_rng(31337)
        for k, p in [(18, 0.2), (18, 0.5), (18, 0.85)]:
            edges = [
                (i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < p
            ]
            g = ThresholdGraph.from_edges(k, edges)
            assert max_clique_exact(g).size == max_clique_size_bruteforce(g)

    def test_expansion_budget_enforced(self):
        rng = np.random.default_rng(8)
        edges = [(i, j) for i in range(40) for j in range(i + 1, 40) if rng.random() < 0.5]
        g = ThresholdGraph.from_edges(40, edges)
        with pytest.raises(BudgetExceeded):
            max_clique_exact(g, max_expansions=5)


def test_exact_solver_wrapper(small_matrix):
    solver = ExactCliqueSolver()
    g = threshold_graph(small_matrix, Fraction(3, 7))
    assert solver.solve(g) == CliqueResult((0, 1, 3))
    assert solver.name == "exact"
