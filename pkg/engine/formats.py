"""
Text formats for curves and graphs.

Euclidean curve::

    curve <n> <d>
    x_1 ... x_d        (n lines)

Graph curve::

    gcurve <n>
    <vertex id>        (n lines)

Graph::

    graph <N> <M>
    e <u> <v> <w>      (M lines)

Blank lines and lines starting with ``#`` are ignored.
"""

import math
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple, Union

from engine.curve_model import Curve, build_curve
from engine.metric_oracles import DistanceOracle, WeightedGraph
from utils.errors import ContractViolation, CurveFormatError, CurveLoadError
from utils.logs import get_logger
from utils.types import AmbientPoint, SpaceKind

formats_logger = get_logger("formats")

PathLike = Union[str, Path]


def _content_lines(path: PathLike) -> Iterator[Tuple[int, List[str]]]:
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                yield number, stripped.split()


def _parse_int(path: PathLike, number: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CurveFormatError(str(path), number, f"{what} must be an integer, got {token!r}") from None


def _parse_float(path: PathLike, number: int, token: str, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CurveFormatError(str(path), number, f"{what} must be a number, got {token!r}") from None
    if not math.isfinite(value):
        raise CurveFormatError(str(path), number, f"{what} must be finite, got {token!r}")
    return value


def read_curve_points(path: PathLike) -> Tuple[SpaceKind, int, List[AmbientPoint]]:
    """
    Parse a curve file.

    Returns:
        (space kind, dimension or 0 for graph curves, points)

    Raises:
        CurveFormatError: with the offending line number.
    """
    lines = _content_lines(path)
    try:
        number, header = next(lines)
    except StopIteration:
        raise CurveFormatError(str(path), 1, "empty file") from None

    if header[0] == "curve" and len(header) == 3:
        n = _parse_int(path, number, header[1], "vertex count")
        dimension = _parse_int(path, number, header[2], "dimension")
        if dimension < 1:
            raise CurveFormatError(str(path), number, "dimension must be at least 1")
        space = SpaceKind.EUCLIDEAN
    elif header[0] == "gcurve" and len(header) == 2:
        n = _parse_int(path, number, header[1], "vertex count")
        dimension = 0
        space = SpaceKind.GRAPH
    else:
        raise CurveFormatError(str(path), number, "expected 'curve <n> <d>' or 'gcurve <n>'")
    if n < 1:
        raise CurveFormatError(str(path), number, "a curve needs at least one vertex")

    points: List[AmbientPoint] = []
    for number, tokens in lines:
        if len(points) == n:
            raise CurveFormatError(str(path), number, f"more than the declared {n} vertices")
        if space is SpaceKind.EUCLIDEAN:
            if len(tokens) != dimension:
                raise CurveFormatError(str(path), number, f"expected {dimension} coordinates, got {len(tokens)}")
            points.append(tuple(_parse_float(path, number, t, "coordinate") for t in tokens))
        else:
            if len(tokens) != 1:
                raise CurveFormatError(str(path), number, "expected one vertex id")
            vertex = _parse_int(path, number, tokens[0], "vertex id")
            if vertex < 0:
                raise CurveFormatError(str(path), number, f"vertex id must be non-negative, got {vertex}")
            points.append(vertex)
    if len(points) != n:
        raise CurveFormatError(str(path), number, f"declared {n} vertices, found {len(points)}")
    return space, dimension, points


def load_curve(path: PathLike, oracle: DistanceOracle) -> Curve:
    """Parse a curve file and measure its edges with oracle."""
    space, _, points = read_curve_points(path)
    if space is not oracle.space:
        raise CurveLoadError(f"{path} holds a {space.value} curve but the oracle is {oracle.space.value}")
    curve = build_curve(points, oracle)
    formats_logger.debug(f"📦 Loaded {curve.n} vertices from {path}")
    return curve


def write_curve_points(path: PathLike, points: Sequence[AmbientPoint], space: SpaceKind) -> None:
    """Write points in the curve format; floats use their shortest round-trip repr."""
    with open(path, "w", encoding="utf-8") as f:
        if space is SpaceKind.EUCLIDEAN:
            dimension = len(points[0])
            f.write(f"curve {len(points)} {dimension}\n")
            for point in points:
                f.write(" ".join(repr(float(x)) for x in point) + "\n")
        else:
            f.write(f"gcurve {len(points)}\n")
            for vertex in points:
                f.write(f"{int(vertex)}\n")


def read_graph(path: PathLike) -> WeightedGraph:
    """
    Parse a graph file.

    Raises:
        CurveFormatError: with the offending line number.
    """
    lines = _content_lines(path)
    try:
        number, header = next(lines)
    except StopIteration:
        raise CurveFormatError(str(path), 1, "empty file") from None
    if header[0] != "graph" or len(header) != 3:
        raise CurveFormatError(str(path), number, "expected 'graph <N> <M>'")
    n_vertices = _parse_int(path, number, header[1], "vertex count")
    n_edges = _parse_int(path, number, header[2], "edge count")

    edges = []
    for number, tokens in lines:
        if len(tokens) != 4 or tokens[0] != "e":
            raise CurveFormatError(str(path), number, "expected 'e <u> <v> <w>'")
        u = _parse_int(path, number, tokens[1], "vertex id")
        v = _parse_int(path, number, tokens[2], "vertex id")
        w = _parse_float(path, number, tokens[3], "weight")
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise CurveFormatError(str(path), number, f"edge ({u}, {v}) outside [0, {n_vertices})")
        if w <= 0.0:
            raise CurveFormatError(str(path), number, f"weight must be positive, got {w}")
        edges.append((u, v, w))
    if len(edges) != n_edges:
        raise CurveFormatError(str(path), number, f"declared {n_edges} edges, found {len(edges)}")
    try:
        return WeightedGraph(n_vertices, edges)
    except ContractViolation as e:
        raise CurveFormatError(str(path), number, str(e)) from e


def write_graph(path: PathLike, graph: WeightedGraph) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"graph {graph.n_vertices} {len(graph.edges)}\n")
        for u, v, w in graph.edges:
            f.write(f"e {u} {v} {float(w)!r}\n")
