#!/usr/bin/env python3
"""
Tests for the deterministic generators
"""

import math

import pytest

from engine.curve_model import build_curve, estimate_packedness
from engine.generators import (
    graph_walk,
    line_points,
    random_graph,
    random_walk_points,
    retrace_points,
    spiral_points,
)
from engine.metric_oracles import euclidean_oracle, graph_oracle
from test_utils import floyd_warshall
from utils.errors import ContractViolation


class TestCurveGenerators:
    """Tests for point generators"""

    def test_line(self):
        """Test endpoints, spacing and dimension"""
        points = line_points(5, 3, length=2.0)
        assert len(points) == 5
        assert points[0] == (0.0, 0.0, 0.0)
        assert points[-1] == (2.0, 0.0, 0.0)
        assert points[2] == (1.0, 0.0, 0.0)
        assert line_points(1) == [(0.0, 0.0)]

    def test_spiral(self):
        """Test the spiral starts at the origin and grows outward"""
        points = spiral_points(200, 2, turns=2.0, spacing=1.0)
        radii = [math.hypot(x, y) for x, y in points]
        assert radii[0] == 0.0
        assert radii[-1] == pytest.approx(2.0)
        assert all(a <= b + 1e-12 for a, b in zip(radii, radii[1:]))

    def test_retrace(self):
        """Test vertex count and the midpoint vertex"""
        points = retrace_points(4, 3)
        assert len(points) == 4 * 2 + 1
        assert [x for (x,) in points] == [0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 1.0, 0.5, 0.0]

    def test_retrace_packedness(self):
        """Test r passes over a unit segment are certified at least 2r-packed"""
        oracle = euclidean_oracle(1)
        report = estimate_packedness(build_curve(retrace_points(6, 5), oracle), oracle)
        assert report.c_lower >= 12.0 - 1e-9

    def test_random_walk_is_deterministic(self):
        """Test equal seeds give equal walks"""
        assert random_walk_points(30, 2, seed=4) == random_walk_points(30, 2, seed=4)
        assert random_walk_points(30, 2, seed=4) != random_walk_points(30, 2, seed=5)
        assert random_walk_points(30, 2, seed=4)[0] == (0.0, 0.0)

    @pytest.mark.parametrize(
        "call",
        [
            lambda: line_points(0),
            lambda: spiral_points(10, 1),
            lambda: retrace_points(0),
            lambda: retrace_points(2, 1),
            lambda: random_walk_points(5, 0),
        ],
    )
    def test_invalid_sizes(self, call):
        """Test non-positive sizes are refused"""
        with pytest.raises(ContractViolation):
            call()


class TestGraphGenerators:
    """Tests for random graphs and walks"""

    def test_graph_is_connected(self):
        """Test every pair of vertices is reachable"""
        graph = random_graph(40, extra_edges=15, seed=1)
        assert len(graph.edges) == 39 + 15
        assert all(math.isfinite(x) for x in floyd_warshall(graph).ravel())
        assert all(0.5 <= w < 2.0 for _, _, w in graph.edges)

    def test_walk_follows_edges(self):
        """Test consecutive walk vertices are adjacent"""
        graph = random_graph(25, extra_edges=5, seed=2)
        adjacent = {(u, v) for u, v, _ in graph.edges} | {(v, u) for u, v, _ in graph.edges}
        walk = graph_walk(graph, 100, seed=3)
        assert len(walk) == 100
        assert all((a, b) in adjacent for a, b in zip(walk, walk[1:]))
        assert walk == graph_walk(graph, 100, seed=3)

    def test_walk_curve(self):
        """Test a walk builds a curve whose edges are the traversed weights"""
        graph = random_graph(10, seed=6)
        oracle = graph_oracle(graph)
        curve = build_curve(graph_walk(graph, 20, seed=7), oracle)
        assert curve.n == 20
        assert all(e > 0 for e in curve.edge_lengths)

    def test_single_vertex_graph(self):
        """Test a one-vertex walk stays put"""
        graph = random_graph(1, extra_edges=3, seed=0)
        assert graph.edges == []
        assert graph_walk(graph, 4) == [0, 0, 0, 0]
