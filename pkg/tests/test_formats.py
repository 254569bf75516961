#!/usr/bin/env python3
"""
Tests for the curve and graph text formats
"""

import pytest

from engine.formats import load_curve, read_curve_points, read_graph, write_curve_points, write_graph
from engine.generators import random_graph, random_walk_points
from utils.errors import CurveFormatError, CurveLoadError
from utils.types import SpaceKind


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestCurveFormat:
    """Tests for curve files"""

    def test_euclidean(self, tmp_path):
        """Test comments and blank lines are skipped"""
        path = _write(tmp_path, "c.txt", "# a square\ncurve 3 2\n0 0\n\n1 0.5\n# done\n-2 1e3\n")
        space, dimension, points = read_curve_points(path)
        assert space is SpaceKind.EUCLIDEAN
        assert dimension == 2
        assert points == [(0.0, 0.0), (1.0, 0.5), (-2.0, 1000.0)]

    def test_graph_curve(self, tmp_path):
        """Test vertex id lines"""
        space, dimension, points = read_curve_points(_write(tmp_path, "g.txt", "gcurve 3\n0\n4\n2\n"))
        assert space is SpaceKind.GRAPH
        assert dimension == 0
        assert points == [0, 4, 2]

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("polyline 2 2\n0 0\n1 1\n", 1),
            ("curve 2 2\n0 0\n1\n", 3),
            ("curve 2 2\n0 0\n1 x\n", 3),
            ("curve 2 1\n0\nnan\n", 3),
            ("curve 2 1\n0\ninf\n", 3),
            ("curve 1 1\n0\n1\n", 3),
            ("\ncurve 3 1\n0\n1\n", 4),
            ("curve 0 1\n", 1),
            ("gcurve 2\n0\n-1\n", 3),
            ("gcurve 2\n0\n1.5\n", 3),
        ],
    )
    def test_errors_carry_line_numbers(self, tmp_path, text, line):
        """Test malformed files report the offending line"""
        with pytest.raises(CurveFormatError) as excinfo:
            read_curve_points(_write(tmp_path, "bad.txt", text))
        assert excinfo.value.line == line
        assert f":{line}:" in str(excinfo.value)

    def test_round_trip(self, tmp_path):
        """Test written points are read back bit for bit"""
        points = random_walk_points(25, 3, seed=11)
        path = tmp_path / "walk.txt"
        write_curve_points(path, points, SpaceKind.EUCLIDEAN)
        assert read_curve_points(path) == (SpaceKind.EUCLIDEAN, 3, points)

    def test_load_curve_space_mismatch(self, tmp_path, plane):
        """Test a graph curve cannot be loaded into a Euclidean space"""
        with pytest.raises(CurveLoadError):
            load_curve(_write(tmp_path, "g.txt", "gcurve 1\n0\n"), plane)

    def test_load_curve_measures_edges(self, tmp_path, plane):
        """Test edge lengths come from the oracle"""
        curve = load_curve(_write(tmp_path, "c.txt", "curve 2 2\n0 0\n3 4\n"), plane)
        assert curve.edge_lengths == (5.0,)


class TestGraphFormat:
    """Tests for graph files"""

    def test_round_trip(self, tmp_path):
        """Test a written graph is read back unchanged"""
        graph = random_graph(12, extra_edges=6, seed=2)
        path = tmp_path / "g.txt"
        write_graph(path, graph)
        loaded = read_graph(path)
        assert loaded.n_vertices == 12
        assert list(loaded.edges) == list(graph.edges)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("graph 2\n", 1),
            ("graph 2 1\nedge 0 1 1\n", 2),
            ("graph 2 1\ne 0 2 1\n", 2),
            ("graph 2 1\ne 0 1 0\n", 2),
            ("graph 2 1\ne 0 1 -1\n", 2),
            ("graph 3 2\ne 0 1 1\n", 2),
        ],
    )
    def test_errors_carry_line_numbers(self, tmp_path, text, line):
        """Test malformed graphs report the offending line"""
        with pytest.raises(CurveFormatError) as excinfo:
            read_graph(_write(tmp_path, "bad.txt", text))
        assert excinfo.value.line == line
