#!/usr/bin/env python3
"""
Tests for the distance oracles
Tests exact Euclidean and graph oracles, the perturbation wrapper and call counting.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from engine.generators import random_graph
from engine.metric_oracles import (
    CountingOracle,
    WeightedGraph,
    euclidean_oracle,
    graph_oracle,
    perturbed_oracle,
)
from test_utils import floyd_warshall
from utils.errors import ContractViolation, CurveLoadError, UnreachableError
from utils.types import PNorm, SpaceKind


class TestEuclideanOracle:
    """Tests for exact L_p distances"""

    @pytest.mark.parametrize("p_norm,expected", [(PNorm.P1, 7.0), (PNorm.P2, 5.0), (PNorm.PINF, 4.0)])
    def test_norms(self, p_norm, expected):
        """Test the three supported norms on a 3-4-5 triangle"""
        oracle = euclidean_oracle(2, p_norm)
        assert oracle.distance((0.0, 0.0), (3.0, 4.0)) == expected
        assert oracle.distance((3.0, 4.0), (0.0, 0.0)) == expected

    def test_exact_and_space(self, plane):
        """Test an Euclidean oracle is exact"""
        assert plane.exact
        assert plane.alpha == 0.0
        assert plane.space is SpaceKind.EUCLIDEAN

    def test_pairwise_matches_distance(self, rng):
        """Test the vectorised matrix agrees with single distances"""
        oracle = euclidean_oracle(3, PNorm.P1)
        left = [tuple(row) for row in rng.normal(size=(5, 3))]
        right = [tuple(row) for row in rng.normal(size=(4, 3))]
        matrix = oracle.pairwise(left, right)
        assert matrix.shape == (5, 4)
        for r, a in enumerate(left):
            for s, b in enumerate(right):
                assert matrix[r, s] == pytest.approx(oracle.distance(a, b), rel=1e-12)

    def test_validate_rejects_wrong_dimension(self, plane):
        """Test a point of the wrong dimension is rejected"""
        with pytest.raises(CurveLoadError):
            plane.validate_point((1.0, 2.0, 3.0))

    def test_validate_rejects_nan(self, plane):
        """Test non-finite coordinates are rejected"""
        with pytest.raises(CurveLoadError):
            plane.validate_point((1.0, math.nan))

    def test_validate_canonicalises(self, plane):
        """Test integer coordinates become float tuples"""
        assert plane.validate_point([1, 2]) == (1.0, 2.0)

    def test_dimension_must_be_positive(self):
        """Test a zero-dimensional space is refused"""
        with pytest.raises(ContractViolation):
            euclidean_oracle(0)


class TestGraphOracle:
    """Tests for shortest-path distances"""

    def test_small_graph(self, small_graph):
        """Test the heavy shortcut is not used"""
        oracle = graph_oracle(small_graph)
        assert oracle.distance(0, 3) == 3.0
        assert oracle.distance(3, 0) == 3.0
        assert oracle.distance(2, 2) == 0.0

    def test_matches_floyd_warshall(self, rng):
        """Test Dijkstra rows against the cubic reference on random graphs"""
        for trial in range(5):
            graph = random_graph(int(rng.integers(2, 30)), extra_edges=20, seed=trial)
            oracle = graph_oracle(graph, cache_size=3)
            reference = floyd_warshall(graph)
            for a in range(graph.n_vertices):
                for b in range(graph.n_vertices):
                    assert oracle.distance(a, b) == pytest.approx(reference[a, b], rel=1e-12)

    def test_symmetry_is_bitwise(self, rng):
        """Test d(a, b) and d(b, a) are the same double"""
        graph = random_graph(40, extra_edges=60, seed=3)
        oracle = graph_oracle(graph)
        for a, b in rng.integers(0, 40, size=(1000, 2)):
            assert oracle.distance(int(a), int(b)) == oracle.distance(int(b), int(a))

    def test_concurrent_distances(self, rng):
        """Test distances requested from eight threads equal the sequential ones"""
        graph = random_graph(60, extra_edges=90, seed=11)
        pairs = [(int(a), int(b)) for a, b in rng.integers(0, 60, size=(2000, 2))]
        expected = [graph_oracle(graph).distance(a, b) for a, b in pairs]
        shared = graph_oracle(graph, cache_size=4)
        with ThreadPoolExecutor(max_workers=8) as pool:
            actual = list(pool.map(lambda pair: shared.distance(*pair), pairs))
        assert actual == expected

    def test_unreachable(self):
        """Test disconnected vertices raise UnreachableError"""
        oracle = graph_oracle(WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)]))
        with pytest.raises(UnreachableError):
            oracle.distance(0, 3)

    def test_parallel_edges_keep_lightest(self):
        """Test the lightest of two parallel edges is used"""
        oracle = graph_oracle(WeightedGraph(2, [(0, 1, 4.0), (1, 0, 2.5)]))
        assert oracle.distance(0, 1) == 2.5

    def test_validate_point(self, small_graph):
        """Test vertex ids are range-checked"""
        oracle = graph_oracle(small_graph)
        assert oracle.validate_point("2") == 2
        with pytest.raises(CurveLoadError):
            oracle.validate_point(4)
        with pytest.raises(CurveLoadError):
            oracle.validate_point("x")

    def test_invalid_graph(self):
        """Test non-positive weights and bad endpoints are refused"""
        with pytest.raises(ContractViolation):
            WeightedGraph(2, [(0, 1, 0.0)])
        with pytest.raises(ContractViolation):
            WeightedGraph(2, [(0, 2, 1.0)])


class TestPerturbedOracle:
    """Tests for the (1+α)-approximate wrapper"""

    def test_contract(self, rng, plane):
        """Test perceived distances stay within the slack, deterministically and symmetrically"""
        alpha = 0.1
        oracle = perturbed_oracle(plane, alpha, seed=7)
        again = perturbed_oracle(plane, alpha, seed=7)
        for _ in range(200):
            a = tuple(float(x) for x in rng.normal(size=2))
            b = tuple(float(x) for x in rng.normal(size=2))
            d = plane.distance(a, b)
            perceived = oracle.distance(a, b)
            assert (1 - alpha) * d <= perceived <= (1 + alpha) * d
            assert perceived == oracle.distance(b, a)
            assert perceived == again.distance(a, b)
        assert oracle.distance((1.0, 1.0), (1.0, 1.0)) == 0.0

    def test_seeds_differ(self, plane):
        """Test two seeds perturb the same pair differently"""
        a, b = (0.0, 0.0), (1.0, 1.0)
        values = {perturbed_oracle(plane, 0.2, seed).distance(a, b) for seed in range(10)}
        assert len(values) > 1

    def test_not_exact(self, plane):
        """Test a positive slack is reported"""
        oracle = perturbed_oracle(plane, 0.05, seed=1)
        assert not oracle.exact
        assert oracle.alpha == 0.05
        assert oracle.dimension == 2

    def test_zero_alpha_is_identity(self, plane):
        """Test α = 0 reproduces the exact distance"""
        oracle = perturbed_oracle(plane, 0.0, seed=1)
        assert oracle.distance((0.0, 0.0), (3.0, 4.0)) == 5.0

    def test_rejections(self, plane):
        """Test invalid slack and double wrapping are refused"""
        with pytest.raises(ContractViolation):
            perturbed_oracle(plane, 1.0, seed=0)
        with pytest.raises(ContractViolation):
            perturbed_oracle(plane, -0.1, seed=0)
        with pytest.raises(ContractViolation):
            perturbed_oracle(perturbed_oracle(plane, 0.1, seed=0), 0.1, seed=1)


class TestCountingOracle:
    """Tests for distance call counting"""

    def test_counts_calls(self, plane):
        """Test every distance evaluation is counted"""
        counting = CountingOracle(plane)
        for _ in range(3):
            counting.distance((0.0, 0.0), (1.0, 0.0))
        assert counting.calls == 3
        assert counting.space is SpaceKind.EUCLIDEAN
        assert counting.exact
