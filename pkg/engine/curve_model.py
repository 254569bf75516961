"""
Curve representation with cached edge and prefix lengths, and a brute-force
estimator for the packedness constant c.

Indices in every public interface are 1-based: vertex p_i is ``curve.point(i)``.
"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from engine.metric_oracles import DistanceOracle
from utils.errors import ContractViolation, CurveLoadError, UnreachableError, UnsupportedSpaceError
from utils.logs import get_logger
from utils.types import AmbientPoint, PackednessReport, PNorm, SpaceKind

curve_logger = get_logger("curve")

# Every finite double is an integer multiple of 2^-1074, so prefix sums kept
# as integers at this scale are exact.
FIXED_SHIFT = 1074
FIXED_ONE = 1 << FIXED_SHIFT

# 2^d half-spaces describe an L1 ball
MAX_L1_PACKEDNESS_DIMENSION = 10


def to_fixed(value: float) -> int:
    """Exact fixed-point image of a finite double."""
    numerator, denominator = float(value).as_integer_ratio()
    return numerator << (FIXED_SHIFT - (denominator.bit_length() - 1))


def from_fixed(value: int) -> float:
    """Nearest double to a fixed-point value."""
    return value / FIXED_ONE


@dataclass(frozen=True)
class Curve:
    """
    Immutable polygonal curve.

    Attributes:
        points (Tuple[AmbientPoint, ...]): Vertices p_1..p_n.
        edge_lengths (Tuple[float, ...]): d(p_i, p_{i+1}) for i = 1..n-1.
        prefix_lengths (Tuple[float, ...]): λ_i = ℓ(P[1, i]), with λ_1 = 0.
        space (SpaceKind): Ambient space of the points.
        alpha (float): Slack of the oracle that produced the edge lengths.
    """

    points: Tuple[AmbientPoint, ...]
    edge_lengths: Tuple[float, ...]
    prefix_lengths: Tuple[float, ...]
    space: SpaceKind = SpaceKind.EUCLIDEAN
    alpha: float = 0.0

    @classmethod
    def from_parts(
        cls, points: Sequence[AmbientPoint], edge_lengths: Sequence[float], space: SpaceKind, alpha: float = 0.0
    ) -> "Curve":
        """Assemble a curve from points and edge lengths, accumulating λ left to right."""
        if len(points) == 0:
            raise CurveLoadError("a curve needs at least one point")
        if len(edge_lengths) != len(points) - 1:
            raise CurveLoadError(f"{len(points)} points need {len(points) - 1} edge lengths, got {len(edge_lengths)}")
        prefix = [0.0]
        for length in edge_lengths:
            if not (math.isfinite(length) and length >= 0.0):
                raise CurveLoadError(f"edge length {length!r} is not a finite non-negative number")
            prefix.append(prefix[-1] + length)
        return cls(tuple(points), tuple(float(e) for e in edge_lengths), tuple(prefix), space, alpha)

    @property
    def n(self) -> int:
        return len(self.points)

    def point(self, i: int) -> AmbientPoint:
        return self.points[i - 1]

    def edge_length(self, i: int) -> float:
        """Length of the edge from p_i to p_{i+1}."""
        return self.edge_lengths[i - 1]

    def exact_positions(self) -> List[int]:
        """λ_1..λ_n as exact fixed-point integers."""
        positions = [0]
        for length in self.edge_lengths:
            positions.append(positions[-1] + to_fixed(length))
        return positions

    def subcurve(self, i: int, j: int) -> "Curve":
        """P[i, j] as a fresh curve."""
        _check_range(self.n, i, j)
        return Curve.from_parts(self.points[i - 1 : j], self.edge_lengths[i - 1 : j - 1], self.space, self.alpha)


def _check_range(n: int, i: int, j: int) -> None:
    if not 1 <= i <= j <= n:
        raise ContractViolation(f"range [{i}, {j}] is invalid for a curve with {n} vertices")


def build_curve(points: Sequence, oracle: DistanceOracle) -> Curve:
    """
    Build a curve whose edge lengths come from oracle.

    Raises:
        CurveLoadError: on an empty sequence, invalid points, or unreachable
            consecutive graph vertices.
    """
    if len(points) == 0:
        raise CurveLoadError("a curve needs at least one point")
    canonical = [oracle.validate_point(p) for p in points]
    edges = []
    for a, b in zip(canonical, canonical[1:]):
        try:
            edges.append(oracle.distance(a, b))
        except UnreachableError as e:
            raise CurveLoadError(f"consecutive vertices cannot be joined: {e}") from e
    return Curve.from_parts(canonical, edges, oracle.space, oracle.alpha)


def subcurve_length(curve: Curve, i: int, j: int) -> float:
    """ℓ(P[i, j]) = λ_j - λ_i."""
    _check_range(curve.n, i, j)
    return curve.prefix_lengths[j - 1] - curve.prefix_lengths[i - 1]


def _halfspace_normals(dimension: int, p_norm: PNorm) -> np.ndarray:
    if p_norm is PNorm.PINF:
        eye = np.eye(dimension)
        return np.vstack([eye, -eye])
    if dimension > MAX_L1_PACKEDNESS_DIMENSION:
        raise UnsupportedSpaceError(f"L1 packedness estimates support dimension ≤ {MAX_L1_PACKEDNESS_DIMENSION}")
    return np.array(list(itertools.product((1.0, -1.0), repeat=dimension)))


def _inside_lengths_l2(offsets: np.ndarray, directions: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Total length of all edges inside each ball, for every radius (Euclidean norm)."""
    a = np.einsum("ij,ij->i", directions, directions)[:, None]
    b = 2.0 * np.einsum("ij,ij->i", offsets, directions)[:, None]
    c = np.einsum("ij,ij->i", offsets, offsets)[:, None] - radii[None, :] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = b * b - 4.0 * a * c
        root = np.sqrt(np.maximum(disc, 0.0))
        t0 = np.clip((-b - root) / (2.0 * a), 0.0, 1.0)
        t1 = np.clip((-b + root) / (2.0 * a), 0.0, 1.0)
    span = np.where((disc >= 0.0) & (a > 0.0), np.maximum(t1 - t0, 0.0), 0.0)
    return (span * np.sqrt(a)).sum(axis=0)


def _inside_lengths_polytope(
    offsets: np.ndarray, directions: np.ndarray, radii: np.ndarray, normals: np.ndarray, p_norm: PNorm
) -> np.ndarray:
    """Total length of all edges inside each ball, for every radius (L1 / L∞ balls as half-space sets)."""
    nw = offsets @ normals.T  # (E, H)
    nv = directions @ normals.T
    bounds = (radii[None, None, :] - nw[:, :, None]) / np.where(nv == 0.0, 1.0, nv)[:, :, None]
    upper = np.where(nv[:, :, None] > 0.0, bounds, np.inf).min(axis=1)
    lower = np.where(nv[:, :, None] < 0.0, bounds, -np.inf).max(axis=1)
    blocked = ((nv[:, :, None] == 0.0) & (nw[:, :, None] > radii[None, None, :])).any(axis=1)
    t0 = np.clip(lower, 0.0, 1.0)
    t1 = np.clip(upper, 0.0, 1.0)
    span = np.where(blocked, 0.0, np.maximum(t1 - t0, 0.0))
    lengths = np.linalg.norm(directions, ord=1 if p_norm is PNorm.P1 else np.inf, axis=1)
    return (span * lengths[:, None]).sum(axis=0)


def estimate_packedness(curve: Curve, oracle: DistanceOracle) -> PackednessReport:
    """
    Certified lower bound on the packedness constant c.

    Balls are centred at every vertex and every edge midpoint, with radii
    d(p_i, p_j)/2 and d(p_i, p_j) for all vertex pairs; edges are clipped to
    each ball exactly and the largest length/radius ratio is returned.

    Raises:
        UnsupportedSpaceError: if the curve is not Euclidean.
        ContractViolation: if the curve has fewer than two vertices.
    """
    if oracle.space is not SpaceKind.EUCLIDEAN:
        raise UnsupportedSpaceError("packedness can only be estimated for Euclidean curves")
    if curve.n < 2:
        raise ContractViolation("packedness needs at least two vertices")

    p_norm = getattr(oracle, "p_norm", PNorm.P2)
    points = np.asarray(curve.points, dtype=np.float64)
    pair = oracle.pairwise(curve.points, curve.points)
    radii = np.unique(np.concatenate([pair.ravel() / 2.0, pair.ravel()]))
    radii = radii[radii > 0.0]
    if radii.size == 0:
        return PackednessReport(0.0, tuple(curve.point(1)), 0.0)

    starts, directions = points[:-1], points[1:] - points[:-1]
    centers = np.vstack([points, (points[:-1] + points[1:]) / 2.0])
    normals = None if p_norm is PNorm.P2 else _halfspace_normals(points.shape[1], p_norm)

    best, best_center, best_radius = 0.0, centers[0], 0.0
    for center in centers:
        offsets = starts - center
        if normals is None:
            inside = _inside_lengths_l2(offsets, directions, radii)
        else:
            inside = _inside_lengths_polytope(offsets, directions, radii, normals, p_norm)
        ratios = inside / radii
        k = int(np.argmax(ratios))
        if ratios[k] > best:
            best, best_center, best_radius = float(ratios[k]), center, float(radii[k])

    curve_logger.debug(f"🔧 Packedness lower bound {best:.4f} at radius {best_radius:.4g}")
    return PackednessReport(best, tuple(float(x) for x in best_center), best_radius)
