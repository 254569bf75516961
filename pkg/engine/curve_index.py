"""
Preprocessed structures for one curve P: the dynamic curve, its
simplification tree, the oracle, and the lazily built TADDs and
nearest-neighbour decomposition.
"""

import threading
from typing import List, Optional, Tuple

from cachetools import LRUCache

from engine.curve_model import Curve
from engine.curve_simplification import DynamicCurve, SimplificationTree, build_tree, extend, truncate
from engine.metric_oracles import DistanceOracle
from engine.tadd import TaddIntervals, build_1tadd, build_2d_tadd, rebuild_after_update, scale_for_frechet
from utils.errors import ContractViolation
from utils.logs import PerformanceTimer, get_logger, log_query_event
from utils.types import AmbientPoint, CurveEnd, EndUpdate

index_logger = get_logger("index")

# Distinct epsilons whose scaled TADD endpoints stay cached.
ENDPOINT_CACHE_SIZE = 8


class CurveIndex:
    """
    Everything the query engines need about P.

    Updates (``extend``/``truncate``) require exclusive access; the derived
    structures they invalidate are rebuilt by the next query that needs them.
    """

    def __init__(
        self,
        curve: DynamicCurve,
        oracle: DistanceOracle,
        tree: SimplificationTree,
        tadd: Optional[TaddIntervals] = None,
        packedness: Optional[float] = None,
    ):
        if tree.count != curve.n - 1:
            raise ContractViolation(f"tree holds {tree.count} edges but the curve has {curve.n} vertices")
        self.curve = curve
        self.oracle = oracle
        self.tree = tree
        self.packedness = packedness
        self._tadd = tadd
        self._pending: List[EndUpdate] = []
        self._endpoints = LRUCache(maxsize=ENDPOINT_CACHE_SIZE)
        self._tadd_2d: Optional[TaddIntervals] = None
        self._nn = None
        self._lock = threading.RLock()

    @classmethod
    def build(
        cls,
        curve: Curve,
        oracle: DistanceOracle,
        packedness: Optional[float] = None,
        hausdorff: bool = False,
        head_offset: int = 0,
    ) -> "CurveIndex":
        """
        Preprocess curve for queries.

        Args:
            curve: The curve P, with edge lengths from oracle.
            oracle: Exact oracle of P's space.
            packedness: Known packedness constant c; enables the Hausdorff early exit.
            hausdorff: Also build the structures of the Hausdorff engine now.
            head_offset: Exact translation of the first vertex. The 1-TADD depends on it, so
                a rebuild meant to match an updated index passes ``index.curve.head_offset``.
        """
        with PerformanceTimer(f"index over {curve.n} vertices") as timer:
            dynamic = DynamicCurve(curve, head_offset=head_offset)
            index = cls(dynamic, oracle, build_tree(dynamic), build_1tadd(dynamic), packedness)
            if hausdorff:
                index.tadd_2d
                index.nn
        index_logger.info(f"🔧 Indexed curve with {curve.n} vertices in {timer.elapsed_ms:.1f}ms")
        return index

    @property
    def n(self) -> int:
        return self.curve.n

    @property
    def tadd(self) -> TaddIntervals:
        """1-TADD of the current prefix lengths."""
        with self._lock:
            if self._tadd is None:
                self._tadd = build_1tadd(self.curve)
            elif self._pending:
                self._tadd = rebuild_after_update(self._tadd, self.curve, self._pending)
            else:
                return self._tadd
            self._pending = []
            self._endpoints.clear()
            return self._tadd

    def frechet_endpoints(self, epsilon: float) -> Tuple[List[float], List[float], List[float]]:
        """
        Sorted endpoints of the 1-TADD scaled for Fréchet value queries at epsilon.

        Returns:
            (endpoints, left ends in ascending order, running maximum of the matching right ends)
        """
        with self._lock:
            tadd = self.tadd
            if epsilon not in self._endpoints:
                intervals = list(scale_for_frechet(tadd, epsilon).intervals)
                reach, best = [], 0.0
                for _, right in intervals:
                    best = max(best, right)
                    reach.append(best)
                lefts = [left for left, _ in intervals]
                self._endpoints[epsilon] = (sorted({x for interval in intervals for x in interval}), lefts, reach)
            return self._endpoints[epsilon]

    @property
    def tadd_2d(self) -> TaddIntervals:
        """TADD of the ambient distances between vertices of P."""
        with self._lock:
            if self._tadd_2d is None:
                self._tadd_2d = build_2d_tadd(self.curve, self.oracle)
            return self._tadd_2d

    @property
    def nn(self):
        """Nearest-neighbour decomposition of P's vertex range."""
        from engine.hausdorff_engine import build_nn_decomposition

        with self._lock:
            if self._nn is None:
                self._nn = build_nn_decomposition(self.curve, self.oracle)
            return self._nn

    @property
    def has_nn(self) -> bool:
        return self._nn is not None

    def _invalidate(self, update: EndUpdate) -> None:
        self._pending.append(update)
        self._tadd_2d = None
        self._nn = None

    def extend(self, end: CurveEnd, point: AmbientPoint, edge_length: Optional[float] = None) -> None:
        """
        Attach a vertex at one end of P.

        When edge_length is omitted it is measured with the index oracle.
        """
        point = self.oracle.validate_point(point)
        if edge_length is None:
            neighbour = self.curve.point(self.n) if end is CurveEnd.TAIL else self.curve.point(1)
            edge_length = self.oracle.distance(neighbour, point)
        with self._lock:
            extend(self.tree, self.curve, end, point, edge_length)
            self._invalidate(EndUpdate("extend", end, self._end_position(end)))
        log_query_event(f"extend-{end.value}", {"n": self.n, "edge_length": edge_length})

    def truncate(self, end: CurveEnd) -> None:
        """Remove the vertex at one end of P."""
        with self._lock:
            position = self._end_position(end)
            truncate(self.tree, self.curve, end)
            self._invalidate(EndUpdate("truncate", end, position))
        log_query_event(f"truncate-{end.value}", {"n": self.n})

    def _end_position(self, end: CurveEnd) -> int:
        return self.curve.position(self.n if end is CurveEnd.TAIL else 1)

    def snapshot(self) -> Curve:
        return self.curve.snapshot()
