"""
Distance oracles for the ambient spaces a curve can live in.

Three concrete oracles are provided: exact L_p distances in R^d, exact
shortest-path distances in a positively weighted graph, and a deterministic
perturbation wrapper that turns an exact oracle into a (1+α)-approximate one.
"""

import hashlib
import math
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from cachetools import LRUCache
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial.distance import cdist

from utils.errors import ContractViolation, CurveLoadError, UnreachableError
from utils.logs import get_logger
from utils.read_config import read_config
from utils.types import AmbientPoint, PNorm, SpaceKind

oracle_logger = get_logger("oracles")


@dataclass
class WeightedGraph:
    """
    Undirected graph with positive edge weights.

    Attributes:
        n_vertices (int): Number of vertices; ids run from 0 to n_vertices - 1.
        edges (List[Tuple[int, int, float]]): Edge list (u, v, weight).
    """

    n_vertices: int
    edges: List[Tuple[int, int, float]] = field(default_factory=list)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ContractViolation("a graph needs at least one vertex")
        for u, v, w in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ContractViolation(f"edge ({u}, {v}) references a vertex outside [0, {self.n_vertices})")
            if not (math.isfinite(w) and w > 0):
                raise ContractViolation(f"edge ({u}, {v}) has non-positive weight {w!r}")

    def to_csr(self) -> csr_matrix:
        """Sparse adjacency matrix; parallel edges keep their lightest weight."""
        lightest: Dict[Tuple[int, int], float] = {}
        for u, v, w in self.edges:
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in lightest or w < lightest[key]:
                lightest[key] = w
        rows = [u for u, _ in lightest]
        cols = [v for _, v in lightest]
        data = list(lightest.values())
        return csr_matrix((data, (rows, cols)), shape=(self.n_vertices, self.n_vertices))


class DistanceOracle(ABC):
    """
    Contract for perceived distances d°(a, b).

    Implementations guarantee (1-α)·d ≤ d° ≤ (1+α)·d, symmetry, d°(a, a) = 0
    and deterministic answers.
    """

    space: SpaceKind
    alpha: float = 0.0

    @property
    def exact(self) -> bool:
        return self.alpha == 0.0

    @abstractmethod
    def distance(self, a: AmbientPoint, b: AmbientPoint) -> float:
        """Perceived distance between two points."""

    @abstractmethod
    def validate_point(self, point) -> AmbientPoint:
        """Return the canonical form of a point, or raise CurveLoadError."""

    def pairwise(self, left: Sequence[AmbientPoint], right: Sequence[AmbientPoint]) -> np.ndarray:
        """Matrix of distances between two point sequences."""
        out = np.empty((len(left), len(right)), dtype=np.float64)
        for r, a in enumerate(left):
            for s, b in enumerate(right):
                out[r, s] = self.distance(a, b)
        return out

    def describe(self) -> dict:
        return {"space": self.space.value, "alpha": self.alpha}


class EuclideanOracle(DistanceOracle):
    """Exact L_p distance between coordinate tuples."""

    space = SpaceKind.EUCLIDEAN

    def __init__(self, dimension: int, p_norm: PNorm = PNorm.P2):
        if dimension < 1:
            raise ContractViolation(f"dimension must be at least 1, got {dimension}")
        self.dimension = dimension
        self.p_norm = p_norm
        self.alpha = 0.0
        self._distance = {
            PNorm.P1: lambda a, b: math.fsum(abs(x - y) for x, y in zip(a, b)),
            PNorm.P2: math.dist,
            PNorm.PINF: lambda a, b: max(abs(x - y) for x, y in zip(a, b)),
        }[p_norm]

    def distance(self, a, b) -> float:
        return self._distance(a, b)

    def validate_point(self, point) -> Tuple[float, ...]:
        coords = tuple(float(x) for x in point)
        if len(coords) != self.dimension:
            raise CurveLoadError(f"point {coords} has dimension {len(coords)}, expected {self.dimension}")
        if not all(math.isfinite(x) for x in coords):
            raise CurveLoadError(f"point {coords} has a non-finite coordinate")
        return coords

    def pairwise(self, left, right) -> np.ndarray:
        if len(left) == 0 or len(right) == 0:
            return np.zeros((len(left), len(right)))
        return cdist(np.asarray(left, dtype=np.float64), np.asarray(right, dtype=np.float64), self.p_norm.cdist_metric)

    def describe(self) -> dict:
        return {**super().describe(), "dimension": self.dimension, "p_norm": self.p_norm.value}


class GraphOracle(DistanceOracle):
    """
    Exact shortest-path distance in a weighted graph.

    Rows of single-source distances are memoised in an LRU cache keyed by the
    smaller endpoint, which also makes d(a, b) and d(b, a) bit-identical.
    """

    space = SpaceKind.GRAPH

    def __init__(self, graph: WeightedGraph, cache_size: int = None):
        self.graph = graph
        self.alpha = 0.0
        self.csr = graph.to_csr()
        self._rows = LRUCache(maxsize=cache_size or read_config()["graph"]["cache_size"])
        self._lock = threading.Lock()

    def _row(self, source: int) -> np.ndarray:
        with self._lock:
            row = self._rows.get(source)
        if row is None:
            row = dijkstra(self.csr, directed=False, indices=source)
            row.setflags(write=False)
            with self._lock:
                self._rows[source] = row
        return row

    def distance(self, a: int, b: int) -> float:
        if a == b:
            return 0.0
        source, target = (a, b) if a < b else (b, a)
        value = float(self._row(source)[target])
        if math.isinf(value):
            raise UnreachableError(source, target)
        return value

    def validate_point(self, point) -> int:
        try:
            vertex = int(point)
        except (TypeError, ValueError) as e:
            raise CurveLoadError(f"{point!r} is not a vertex id") from e
        if not 0 <= vertex < self.graph.n_vertices:
            raise CurveLoadError(f"vertex {vertex} outside [0, {self.graph.n_vertices})")
        return vertex

    def describe(self) -> dict:
        return {**super().describe(), "vertices": self.graph.n_vertices, "edges": len(self.graph.edges)}


class PerturbedOracle(DistanceOracle):
    """
    Deterministic adversarial wrapper: d° = d·(1 + α·u) with u in [-1, 1]
    drawn from a stable hash of the seed and the unordered point pair.
    """

    def __init__(self, base: DistanceOracle, alpha: float, seed: int):
        self.base = base
        self.alpha = float(alpha)
        self.seed = int(seed)
        self.space = base.space

    def _unit(self, a, b) -> float:
        first, second = sorted((repr(a), repr(b)))
        digest = hashlib.blake2b(f"{self.seed}|{first}|{second}".encode(), digest_size=8).digest()
        return 2.0 * (int.from_bytes(digest, "little") / 2.0**64) - 1.0

    def distance(self, a, b) -> float:
        if a == b:
            return 0.0
        value = self.base.distance(a, b)
        perturbed = value * (1.0 + self.alpha * self._unit(a, b))
        # clamp rounding so the contract holds exactly
        return min(max(perturbed, (1.0 - self.alpha) * value), (1.0 + self.alpha) * value)

    def validate_point(self, point):
        return self.base.validate_point(point)

    def __getattr__(self, name):
        # dimension, p_norm, graph of the wrapped oracle
        return getattr(self.base, name)

    def describe(self) -> dict:
        return {**self.base.describe(), "alpha": self.alpha, "seed": self.seed}


class CountingOracle(DistanceOracle):
    """Query-local wrapper that counts distance evaluations."""

    def __init__(self, base: DistanceOracle):
        self.base = base
        self.space = base.space
        self.alpha = base.alpha
        self.calls = 0

    def distance(self, a, b) -> float:
        self.calls += 1
        return self.base.distance(a, b)

    def validate_point(self, point):
        return self.base.validate_point(point)


def euclidean_oracle(dimension: int, p_norm: PNorm = PNorm.P2) -> EuclideanOracle:
    """Exact oracle for R^dimension under the given L_p norm."""
    return EuclideanOracle(dimension, p_norm)


def graph_oracle(graph: WeightedGraph, cache_size: int = None) -> GraphOracle:
    """Exact shortest-path oracle over graph."""
    oracle_logger.debug(f"🔧 Graph oracle over {graph.n_vertices} vertices, {len(graph.edges)} edges")
    return GraphOracle(graph, cache_size)


def perturbed_oracle(base: DistanceOracle, alpha: float, seed: int) -> PerturbedOracle:
    """
    Wrap an exact oracle so every distance is off by a factor in [1-α, 1+α].

    Raises:
        ContractViolation: if base is not exact or alpha is outside [0, 1).
    """
    if not base.exact:
        raise ContractViolation("only exact oracles can be perturbed")
    if not 0.0 <= alpha < 1.0:
        raise ContractViolation(f"alpha must lie in [0, 1), got {alpha!r}")
    return PerturbedOracle(base, alpha, seed)
