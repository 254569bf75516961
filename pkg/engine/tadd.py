"""
Two-approximate distance decompositions (TADDs).

A TADD is a sorted family of values c_s such that every positive pairwise
distance δ of the source set satisfies c_s ≤ δ ≤ 2·c_s for some s. The 1-TADD
of a curve decomposes its prefix lengths λ_1..λ_n; the 2-D TADD decomposes
the ambient distances between its vertices.

Both are built from a well-separated pair decomposition over a split tree.
"""

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from engine.curve_model import FIXED_ONE
from engine.curve_simplification import CenteredBuffer
from engine.metric_oracles import DistanceOracle
from utils.errors import ContractViolation
from utils.logs import PerformanceTimer, get_logger
from utils.types import CurveEnd, EndUpdate, PNorm, SpaceKind

tadd_logger = get_logger("tadd")

# Separation for the 1-D decomposition: cluster diameters at most half the gap.
SEPARATION_1D = 2
# Separation for the ambient decomposition, measured with bounding-box radii.
SEPARATION_2D = 5.0
# Shrinks ambient lower bounds so float rounding never lifts them above a true distance.
_LOWER_BOUND_SHRINK = 1.0 - 1e-12


@dataclass(frozen=True)
class TaddIntervals:
    """
    Sorted family of values c_s, each standing for the interval [c_s, 2·c_s].

    Attributes:
        values (Tuple[float, ...]): Distinct c_s in ascending order.
        pairs (int): Well-separated pairs the family was derived from.
        split (Optional[PrefixSplitTree]): Split tree the family was read from, kept for updates.
    """

    values: Tuple[float, ...] = ()
    pairs: int = 0
    split: Optional["PrefixSplitTree"] = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.values)

    def intervals(self) -> List[Tuple[float, float]]:
        return [(c, 2.0 * c) for c in self.values]


@dataclass(frozen=True)
class ScaledIntervalSet:
    """
    Candidate intervals for a value search, sorted by left endpoint.

    Attributes:
        intervals (Tuple[Tuple[float, float], ...]): Closed intervals [left, right].
    """

    intervals: Tuple[Tuple[float, float], ...]

    def endpoints(self) -> List[float]:
        """All distinct endpoints in ascending order."""
        return sorted({x for interval in self.intervals for x in interval})


# Key of the root that joins negative and non-negative positions.
_SIGN_ROOT = ("sign",)
# A full rebuild happens once the position span leaves [span/2, 2·span] of the last build.
REBUILD_SPAN_FACTOR = 2


class PrefixSplitTree:
    """
    Compressed dyadic split tree over exact prefix positions, with the
    well-separated pairs of every internal node.

    Cells sit on the absolute binary grid of the fixed-point positions: a
    node over values x..y is the cell of width 2^e, e = bit_length(x ^ y),
    that holds both. The tree is therefore a function of the position set
    alone, and attaching or removing an extreme position only touches the
    nodes whose cells contain it. Contributions (pair gaps) are kept per
    node so those nodes can be swapped out without revisiting the others.
    """

    def __init__(self, positions: Iterable[int] = ()):
        self.rebuilds = 0
        self._build(positions)

    def _build(self, positions: Iterable[int]) -> None:
        self._counts: Counter = Counter(positions)
        self._values: CenteredBuffer[int] = CenteredBuffer(sorted(self._counts))
        self._contributions: Dict[Hashable, List[int]] = {}
        self._gaps: Counter = Counter()
        stack = [(0, len(self._values) - 1)] if len(self._values) > 1 else []
        while stack:
            a, b = stack.pop()
            if a == b:
                continue
            s = self._split(a, b)
            self._remember(a, b)
            stack.extend([(a, s - 1), (s, b)])
        self._span_at_build = self.span

    @property
    def span(self) -> int:
        """Exact distance between the extreme positions."""
        if len(self._values) < 2:
            return 0
        return self._values[len(self._values) - 1] - self._values[0]

    @property
    def pairs(self) -> int:
        return sum(self._gaps.values())

    def _key(self, a: int, b: int) -> Hashable:
        x, y = self._values[a], self._values[b]
        if x < 0 <= y:
            return _SIGN_ROOT
        e = (x ^ y).bit_length()
        return e, x >> e

    @staticmethod
    def _contains(key: Hashable, x: int) -> bool:
        if key == _SIGN_ROOT:
            return True
        e, k = key
        return x >> e == k

    def _split(self, a: int, b: int) -> int:
        """First index of the right child of the node over values[a..b]."""
        key = self._key(a, b)
        if key == _SIGN_ROOT:
            return self._values.bisect_left(0, a, b + 1)
        e, k = key
        return self._values.bisect_left((k << e) + (1 << (e - 1)), a, b + 1)

    def _bounds(self, a: int, b: int) -> Tuple[int, int]:
        if a == b:
            return self._values[a], self._values[a]
        e, k = self._key(a, b)
        return k << e, (k + 1) << e

    def _pair_gaps(self, left: Tuple[int, int], right: Tuple[int, int]) -> List[int]:
        """Gaps of the well-separated pairs between two sibling nodes."""
        gaps = []
        stack = [(left, right)]
        while stack:
            u, v = stack.pop()
            u_lo, u_hi = self._bounds(*u)
            v_lo, v_hi = self._bounds(*v)
            gap = v_lo - u_hi
            wu, wv = u_hi - u_lo, v_hi - v_lo
            if gap > 0 and gap >= SEPARATION_1D * max(wu, wv):
                gaps.append(gap)
            elif wu >= wv:
                s = self._split(*u)
                stack.extend([((u[0], s - 1), v), ((s, u[1]), v)])
            else:
                s = self._split(*v)
                stack.extend([(u, (v[0], s - 1)), (u, (s, v[1]))])
        return gaps

    def _remember(self, a: int, b: int) -> None:
        s = self._split(a, b)
        gaps = self._pair_gaps((a, s - 1), (s, b))
        self._contributions[self._key(a, b)] = gaps
        self._gaps.update(gaps)

    def _forget(self, key: Hashable) -> None:
        for gap in self._contributions.pop(key):
            self._gaps[gap] -= 1
            if self._gaps[gap] == 0:
                del self._gaps[gap]

    def _spine(self, end: CurveEnd) -> List[Tuple[int, int]]:
        """Internal nodes on the path from the root to the extreme value at end."""
        a, b = 0, len(self._values) - 1
        spine = []
        while a < b:
            spine.append((a, b))
            s = self._split(a, b)
            a, b = (s, b) if end is CurveEnd.TAIL else (a, s - 1)
        return spine

    def _extreme(self, end: CurveEnd) -> int:
        return self._values[len(self._values) - 1] if end is CurveEnd.TAIL else self._values[0]

    def insert(self, end: CurveEnd, x: int) -> None:
        """Add position x, which must not lie inside the current range on the side of end."""
        if self._counts[x]:
            self._counts[x] += 1
            return
        if len(self._values) and (x < self._extreme(end) if end is CurveEnd.TAIL else x > self._extreme(end)):
            raise ContractViolation(f"position {x} does not extend the {end.value} of the split tree")
        for a, b in self._spine(end):
            key = self._key(a, b)
            if self._contains(key, x):
                self._forget(key)
        self._counts[x] = 1
        if end is CurveEnd.TAIL:
            self._values.append(x)
        else:
            self._values.appendleft(x)
        for a, b in self._spine(end):
            self._remember(a, b)
        self._check_span()

    def remove(self, end: CurveEnd, x: int) -> None:
        """Drop one copy of position x, which must be the extreme value at end."""
        if not self._counts[x] or x != self._extreme(end):
            raise ContractViolation(f"position {x} is not at the {end.value} of the split tree")
        self._counts[x] -= 1
        if self._counts[x]:
            return
        del self._counts[x]
        for a, b in self._spine(end):
            self._forget(self._key(a, b))
        if end is CurveEnd.TAIL:
            self._values.pop()
        else:
            self._values.popleft()
        for a, b in self._spine(end):
            if self._contains(self._key(a, b), x):
                self._remember(a, b)
        self._check_span()

    def apply(self, update: EndUpdate) -> None:
        if update.kind == "extend":
            self.insert(update.end, update.position)
        elif update.kind == "truncate":
            self.remove(update.end, update.position)
        else:
            raise ContractViolation(f"unknown update kind {update.kind!r}")

    def _check_span(self) -> None:
        span, built = self.span, self._span_at_build
        if span > REBUILD_SPAN_FACTOR * built or REBUILD_SPAN_FACTOR * span < built:
            tadd_logger.debug(f"♻️ split tree span moved from {built} to {span}, rebuilding")
            self._build(list(self._counts.elements()))
            self.rebuilds += 1

    def tadd(self) -> "TaddIntervals":
        values = tuple(dict.fromkeys(gap / FIXED_ONE for gap in sorted(self._gaps)))
        return TaddIntervals(values, self.pairs, self)


def tadd_from_positions(positions: Sequence[int]) -> TaddIntervals:
    """1-TADD of exact fixed-point positions."""
    return PrefixSplitTree(positions).tadd()


def build_1tadd(curve) -> TaddIntervals:
    """
    1-TADD of the prefix lengths of curve (a Curve or DynamicCurve).

    The family depends on the stored translated positions: two curves with
    the same positions, head offset included, get the same family.
    """
    with PerformanceTimer(f"1-TADD over {curve.n} vertices") as timer:
        tadd = tadd_from_positions(curve.exact_positions())
    tadd_logger.debug(f"🔧 1-TADD: {len(tadd)} values from {tadd.pairs} pairs in {timer.elapsed_ms:.1f}ms")
    return tadd


def rebuild_after_update(tadd: TaddIntervals, curve, updates: Sequence[EndUpdate] = ()) -> TaddIntervals:
    """
    1-TADD of curve after the given end updates were applied to it.

    The split tree behind tadd is edited in place at the affected end; it is
    rebuilt from scratch when tadd has none (a family loaded from a bundle)
    or when the span of the positions doubled or halved since its last
    build. Either way the result equals ``build_1tadd(curve)``.
    """
    split = tadd.split
    if split is None:
        rebuilt = build_1tadd(curve)
    else:
        for update in updates:
            split.apply(update)
        rebuilt = split.tadd()
    tadd_logger.debug(f"♻️ 1-TADD after {len(updates)} updates: {len(tadd)} → {len(rebuilt)} values")
    return rebuilt


def _norm(vectors: np.ndarray, p_norm: PNorm) -> np.ndarray:
    return np.linalg.norm(vectors, ord={PNorm.P1: 1, PNorm.P2: 2, PNorm.PINF: np.inf}[p_norm], axis=-1)


def _ambient_wspd(points: np.ndarray, p_norm: PNorm) -> Tuple[List[float], int]:
    """Lower bounds of all well-separated pairs of a fair split tree over distinct points."""
    members: List[np.ndarray] = [np.arange(len(points))]
    centers: List[np.ndarray] = []
    radii: List[float] = []
    children: List[Tuple[int, int]] = []
    stack = [0]
    centers.append(None)
    radii.append(0.0)
    children.append((-1, -1))
    while stack:
        v = stack.pop()
        block = points[members[v]]
        low, high = block.min(axis=0), block.max(axis=0)
        centers[v] = (low + high) / 2.0
        radii[v] = float(_norm((high - low) / 2.0, p_norm))
        if len(members[v]) == 1:
            continue
        axis = int(np.argmax(high - low))
        mid = (low[axis] + high[axis]) / 2.0
        mask = block[:, axis] <= mid
        if mask.all():
            mask = block[:, axis] < high[axis]
        for part in (members[v][mask], members[v][~mask]):
            members.append(part)
            centers.append(None)
            radii.append(0.0)
            children.append((-1, -1))
            stack.append(len(members) - 1)
        children[v] = (len(members) - 2, len(members) - 1)

    bounds = []
    pairs = 0
    for v, (l, r) in enumerate(children):
        if l < 0:
            continue
        stack = [(l, r)]
        while stack:
            a, b = stack.pop()
            gap = float(_norm(centers[a] - centers[b], p_norm)) - radii[a] - radii[b]
            if gap > 0.0 and gap >= SEPARATION_2D * max(radii[a], radii[b]):
                bounds.append(gap * _LOWER_BOUND_SHRINK)
                pairs += 1
            elif radii[a] >= radii[b]:
                stack.extend([(children[a][0], b), (children[a][1], b)])
            else:
                stack.extend([(a, children[b][0]), (a, children[b][1])])
    return bounds, pairs


def tadd_from_distances(distances: Iterable[float]) -> TaddIntervals:
    """Greedy TADD covering an explicit distance multiset."""
    positive = sorted({float(d) for d in distances if d > 0.0})
    values = []
    for d in positive:
        if not values or d > 2.0 * values[-1]:
            values.append(d)
    return TaddIntervals(tuple(values), len(values))


def build_2d_tadd(curve, oracle: DistanceOracle) -> TaddIntervals:
    """
    TADD of the ambient distances between the vertices of curve.

    Euclidean curves use a fair split tree; other spaces fall back to the
    explicit all-pairs distance matrix.
    """
    if curve.n < 2:
        return TaddIntervals()
    with PerformanceTimer(f"2-D TADD over {curve.n} vertices") as timer:
        if oracle.space is SpaceKind.EUCLIDEAN:
            points = np.unique(np.asarray(list(curve.points), dtype=np.float64), axis=0)
            if len(points) < 2:
                tadd = TaddIntervals()
            else:
                bounds, pairs = _ambient_wspd(points, getattr(oracle, "p_norm", PNorm.P2))
                tadd = TaddIntervals(tuple(sorted(set(bounds))), pairs)
        else:
            points = list(curve.points)
            tadd = tadd_from_distances(oracle.pairwise(points, points).ravel())
    tadd_logger.debug(f"🔧 2-D TADD: {len(tadd)} values in {timer.elapsed_ms:.1f}ms")
    return tadd


def verify_tadd(distances: Iterable[float], tadd: TaddIntervals) -> bool:
    """True iff every positive distance lies in some [c_s, 2·c_s]."""
    values = list(tadd.values)
    for d in distances:
        if d <= 0.0:
            continue
        k = bisect.bisect_right(values, d) - 1
        if k < 0 or d > 2.0 * values[k]:
            return False
    return True


def scale_for_frechet(tadd: TaddIntervals, epsilon: float) -> ScaledIntervalSet:
    """Intervals [6c/ε, 12c/ε] plus the sentinel [0, 0]."""
    if not 0.0 < epsilon < 1.0:
        raise ContractViolation(f"epsilon must lie in (0, 1), got {epsilon!r}")
    intervals = [(0.0, 0.0)] + [(6.0 * c / epsilon, 12.0 * c / epsilon) for c in tadd.values]
    return ScaledIntervalSet(tuple(sorted(intervals)))


def scale_for_hausdorff(tadd: TaddIntervals, lam: float) -> ScaledIntervalSet:
    """Intervals [c/2, 4c] plus [λ, 2λ]."""
    if not (math.isfinite(lam) and lam >= 0.0):
        raise ContractViolation(f"lambda must be finite and non-negative, got {lam!r}")
    intervals = [(0.5 * c, 4.0 * c) for c in tadd.values] + [(lam, 2.0 * lam)]
    return ScaledIntervalSet(tuple(sorted(intervals)))
