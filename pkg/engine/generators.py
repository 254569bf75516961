"""
Deterministic curve and graph generators.

``line`` curves are 2-packed; a ``retrace`` curve that runs r times over a
unit segment is exactly 2r-packed. All randomness comes from
``numpy.random.default_rng(seed)``.
"""

import math
from typing import List, Tuple

import numpy as np

from engine.metric_oracles import WeightedGraph
from utils.errors import ContractViolation


def _check_size(name: str, value: int, minimum: int = 1) -> None:
    if value < minimum:
        raise ContractViolation(f"{name} must be at least {minimum}, got {value}")


def line_points(n: int, dimension: int = 2, length: float = 1.0) -> List[Tuple[float, ...]]:
    """n evenly spaced collinear points from the origin along the first axis."""
    _check_size("n", n)
    _check_size("dimension", dimension)
    points = np.zeros((n, dimension))
    if n > 1:
        points[:, 0] = np.linspace(0.0, length, n)
    return [tuple(float(x) for x in row) for row in points]


def spiral_points(n: int, dimension: int = 2, turns: float = 3.0, spacing: float = 1.0) -> List[Tuple[float, ...]]:
    """Archimedean spiral in the first two coordinates, r = spacing · θ / 2π."""
    _check_size("n", n)
    _check_size("dimension", dimension, 2)
    theta = np.linspace(0.0, 2.0 * math.pi * turns, n)
    radius = spacing * theta / (2.0 * math.pi)
    points = np.zeros((n, dimension))
    points[:, 0] = radius * np.cos(theta)
    points[:, 1] = radius * np.sin(theta)
    return [tuple(float(x) for x in row) for row in points]


def retrace_points(passes: int, points_per_pass: int = 3, dimension: int = 1) -> List[Tuple[float, ...]]:
    """
    Walk the unit segment [0, 1] back and forth.

    Each pass is sampled at points_per_pass evenly spaced points; an odd count
    puts a vertex on the midpoint.
    """
    _check_size("passes", passes)
    _check_size("points_per_pass", points_per_pass, 2)
    _check_size("dimension", dimension)
    forward = np.linspace(0.0, 1.0, points_per_pass)
    xs = [0.0]
    for k in range(passes):
        samples = forward if k % 2 == 0 else forward[::-1]
        xs.extend(float(x) for x in samples[1:])
    return [(x,) + (0.0,) * (dimension - 1) for x in xs]


def random_walk_points(n: int, dimension: int = 2, seed: int = 0, step: float = 1.0) -> List[Tuple[float, ...]]:
    """Gaussian random walk starting at the origin."""
    _check_size("n", n)
    _check_size("dimension", dimension)
    rng = np.random.default_rng(seed)
    steps = rng.normal(scale=step, size=(n - 1, dimension))
    points = np.vstack([np.zeros((1, dimension)), np.cumsum(steps, axis=0)])
    return [tuple(float(x) for x in row) for row in points]


def random_graph(n_vertices: int, extra_edges: int = 0, seed: int = 0) -> WeightedGraph:
    """Connected graph: a random spanning tree plus extra_edges random edges, weights in [0.5, 2)."""
    _check_size("n_vertices", n_vertices)
    rng = np.random.default_rng(seed)
    edges = []
    for v in range(1, n_vertices):
        u = int(rng.integers(0, v))
        edges.append((u, v, float(rng.uniform(0.5, 2.0))))
    if n_vertices > 1:
        for _ in range(extra_edges):
            u, v = (int(x) for x in rng.choice(n_vertices, size=2, replace=False))
            edges.append((u, v, float(rng.uniform(0.5, 2.0))))
    return WeightedGraph(n_vertices, edges)


def graph_walk(graph: WeightedGraph, n: int, seed: int = 0) -> List[int]:
    """Random walk of n vertices along the edges of graph."""
    _check_size("n", n)
    rng = np.random.default_rng(seed)
    neighbours: List[List[int]] = [[] for _ in range(graph.n_vertices)]
    for u, v, _ in graph.edges:
        if u != v:
            neighbours[u].append(v)
            neighbours[v].append(u)
    walk = [int(rng.integers(0, graph.n_vertices))]
    while len(walk) < n:
        options = neighbours[walk[-1]]
        walk.append(int(options[int(rng.integers(0, len(options)))]) if options else walk[-1])
    return walk
