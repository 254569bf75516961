"""
Approximate Hausdorff queries against a preprocessed curve.

A balanced binary decomposition of P's vertex range carries an exact
nearest-neighbour index per node, so the nearest vertex of any subrange
P[a, b] to a query point is found from O(log n) node answers. The decision
walks each query vertex's row of the Hausdorff matrix by repeatedly taking
the nearest vertex in a range, marking the simplification column it falls
into and splitting the range around that column's block.
"""

import bisect
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from engine.curve_simplification import simplify
from engine.metric_oracles import CountingOracle, DistanceOracle
from engine.tadd import scale_for_hausdorff
from utils.errors import BudgetExceededError, ContractViolation, UnreachableError
from utils.logs import PerformanceTimer, get_logger, log_function_call, log_query_event
from utils.read_config import exact_budget, read_config
from utils.types import AmbientPoint, DecisionOutcome, PNorm, QueryAudit, SpaceKind, ValueResult, Verdict

if TYPE_CHECKING:
    from engine.curve_index import CurveIndex

hausdorff_logger = get_logger("hausdorff")

# Candidates (local index list) for the nearest vertex of one node to a query point.
NodeFinder = Callable[[AmbientPoint], List[int]]


@dataclass
class NnNode:
    """
    One node of the decomposition.

    Attributes:
        lo (int): First vertex index covered (1-based).
        hi (int): Last vertex index covered.
        left (int): Child node id, -1 for leaves.
        right (int): Child node id, -1 for leaves.
        finder (Optional[NodeFinder]): Nearest-vertex index; None for leaves, which are scanned.
    """

    lo: int
    hi: int
    left: int = -1
    right: int = -1
    finder: Optional[NodeFinder] = None


class NnDecomposition:
    """Balanced binary decomposition of [1, n] with a nearest-neighbour index per internal node."""

    def __init__(self, points: List[AmbientPoint], oracle: DistanceOracle, leaf_size: int):
        self.points = points
        self.oracle = oracle
        self.leaf_size = max(1, leaf_size)
        self.nodes: List[NnNode] = [NnNode(1, len(points))]
        stack = [0]
        while stack:
            v = stack.pop()
            node = self.nodes[v]
            if node.hi - node.lo + 1 <= self.leaf_size:
                continue
            mid = (node.lo + node.hi) // 2
            node.left, node.right = len(self.nodes), len(self.nodes) + 1
            self.nodes.extend([NnNode(node.lo, mid), NnNode(mid + 1, node.hi)])
            stack.extend([node.left, node.right])
            node.finder = self._make_finder(node.lo, node.hi)

    @property
    def n(self) -> int:
        return len(self.points)

    def _make_finder(self, lo: int, hi: int) -> NodeFinder:
        block = self.points[lo - 1 : hi]
        if self.oracle.space is SpaceKind.EUCLIDEAN:
            tree = cKDTree(np.asarray(block, dtype=np.float64))
            p = getattr(self.oracle, "p_norm", PNorm.P2).minkowski
            k = [1, 2] if len(block) > 1 else [1]

            def euclidean_finder(q: AmbientPoint) -> List[int]:
                _, local = tree.query(np.asarray(q, dtype=np.float64), k=k, p=p)
                return [lo + int(x) for x in np.atleast_1d(local) if x < len(block)]

            return euclidean_finder

        first_index: Dict[int, int] = {}
        for index in range(hi, lo - 1, -1):
            first_index[self.points[index - 1]] = index
        sources = np.array(sorted(first_index), dtype=np.int64)
        _, _, nearest_source = dijkstra(
            self.oracle.csr, directed=False, indices=sources, min_only=True, return_predecessors=True
        )

        def graph_finder(q: AmbientPoint) -> List[int]:
            source = int(nearest_source[q])
            return [first_index[source]] if source >= 0 else []

        return graph_finder

    def cover(self, i: int, j: int) -> List[Tuple[int, int, int]]:
        """
        Nodes answering a range query on [i, j].

        Returns:
            (node id, first, last) triples; internal nodes are fully inside
            [i, j], leaves may be clipped.
        """
        out = []
        stack = [0]
        while stack:
            v = stack.pop()
            node = self.nodes[v]
            if node.hi < i or node.lo > j:
                continue
            if (i <= node.lo and node.hi <= j) or node.finder is None:
                out.append((v, max(node.lo, i), min(node.hi, j)))
            else:
                stack.extend([node.right, node.left])
        return out


def build_nn_decomposition(curve, oracle: DistanceOracle, leaf_size: Optional[int] = None) -> NnDecomposition:
    """Nearest-neighbour decomposition over the vertices of curve (a Curve or DynamicCurve)."""
    leaf_size = leaf_size or read_config()["nn"]["leaf_size"]
    with PerformanceTimer(f"NN decomposition over {curve.n} vertices") as timer:
        dec = NnDecomposition(list(curve.points), oracle, leaf_size)
    hausdorff_logger.debug(f"🔧 NN decomposition: {len(dec.nodes)} nodes in {timer.elapsed_ms:.1f}ms")
    return dec


def nearest_in_range(
    dec: NnDecomposition, q: AmbientPoint, i: int, j: int, oracle: Optional[DistanceOracle] = None
) -> Tuple[int, float]:
    """
    Vertex of P[i, j] nearest to q, with its distance.

    Ties are broken toward the smaller index among the candidates inspected.

    Raises:
        ContractViolation: on an invalid range.
        UnreachableError: if no vertex of the range reaches q.
    """
    if not 1 <= i <= j <= dec.n:
        raise ContractViolation(f"range [{i}, {j}] is invalid for a curve with {dec.n} vertices")
    oracle = oracle or dec.oracle
    best: Tuple[float, int] = (math.inf, 0)
    for v, first, last in dec.cover(i, j):
        node = dec.nodes[v]
        candidates = node.finder(q) if node.finder is not None and (first, last) == (node.lo, node.hi) else range(first, last + 1)
        for z in candidates:
            best = min(best, (oracle.distance(dec.points[z - 1], q), z))
    if best[1] == 0:
        raise UnreachableError(dec.points[i - 1], q)
    return best[1], best[0]


@log_function_call
def exact_hausdorff(p, q, oracle: DistanceOracle, budget: Optional[int] = None) -> float:
    """
    Exact Hausdorff distance between the vertex sets of two curves.

    Raises:
        ContractViolation: if the oracle is approximate.
        BudgetExceededError: if n·m exceeds the budget.
    """
    if not oracle.exact:
        raise ContractViolation("the exact baseline needs an exact oracle")
    budget = exact_budget() if budget is None else budget
    if p.n * q.n > budget:
        raise BudgetExceededError(p.n, q.n, budget)
    distance_matrix = oracle.pairwise(list(p.points), list(q.points))
    max_dist_p_to_q = np.max(np.min(distance_matrix, axis=1))
    max_dist_q_to_p = np.max(np.min(distance_matrix, axis=0))
    return float(max(max_dist_p_to_q, max_dist_q_to_p))


def _check_query(index: "CurveIndex", epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise ContractViolation(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not index.oracle.exact:
        raise ContractViolation("Hausdorff queries need an exact oracle")


def _scan(
    index: "CurveIndex",
    q,
    epsilon: float,
    rho_star: float,
    mu: float,
    i: int,
    j: int,
    cap: Optional[int],
    collect: bool,
) -> Tuple[Verdict, QueryAudit, Dict[int, float], Tuple[int, ...]]:
    """
    Walk the Hausdorff matrix of P[i, j]^μ against Q at threshold ρ*.

    Returns:
        (verdict, audit, smallest zero distance per column when collect is set, kept columns)
    """
    audit = QueryAudit(decisions=1)
    view = simplify(index.tree, index.curve, mu, i, j, cap)
    audit.tree_node_visits = view.node_visits
    audit.simplified_vertices = len(view.indices)
    kept = view.indices
    if cap is not None and len(kept) >= cap:
        hausdorff_logger.debug(f"🔍 simplification exceeds {cap - 1} vertices, early exit")
        return Verdict.GREATER_THAN, audit, {}, kept

    dec = index.nn
    counting = CountingOracle(index.oracle)
    block_end = {x: y - 1 for x, y in zip(kept, kept[1:])}
    block_end[kept[-1]] = kept[-1]
    alive = set(kept)
    column_min: Dict[int, float] = {}
    verdict = Verdict.AT_MOST

    for b in range(1, q.n + 1):
        point = q.point(b)
        stack = [(i, j)]
        row_pushes, row_zeroes = 1, 0
        while stack:
            lo, hi = stack.pop()
            if lo > hi:
                continue
            z, dist = nearest_in_range(dec, point, lo, hi, counting)
            if dist > rho_star:
                continue
            s = kept[bisect.bisect_right(kept, z) - 1]
            row_zeroes += 1
            alive.discard(s)
            if collect and dist < column_min.get(s, math.inf):
                column_min[s] = dist
            stack.append((lo, s - 1))
            stack.append((block_end[s] + 1, hi))
            row_pushes += 2
        audit.cells_pushed += row_pushes
        audit.zeroes_found += row_zeroes
        audit.max_row_pushes = max(audit.max_row_pushes, row_pushes)
        audit.max_row_zeroes = max(audit.max_row_zeroes, row_zeroes)
        if row_zeroes == 0:
            verdict = Verdict.GREATER_THAN
            break

    if verdict is Verdict.AT_MOST and alive:
        verdict = Verdict.GREATER_THAN
    audit.oracle_calls = counting.calls
    return verdict, audit, column_min, kept


def _early_exit_cap(index: "CurveIndex", m: int, epsilon: float) -> Optional[int]:
    if index.packedness is None:
        return None
    return int(math.floor(8.0 * index.packedness * m / epsilon)) + 1


def hausdorff_decide(
    index: "CurveIndex",
    q,
    epsilon: float,
    rho_star: float,
    mu: Optional[float] = None,
    i: Optional[int] = None,
    j: Optional[int] = None,
) -> DecisionOutcome:
    """
    One-sided decision for D_H(P[i, j], Q) against ρ*.

    AT_MOST means D_H ≤ (1+ε)ρ*; GREATER_THAN means D_H > ρ*. With a
    configured packedness c, a simplification longer than 8cm/ε answers
    GREATER_THAN immediately.
    """
    _check_query(index, epsilon)
    if not (math.isfinite(rho_star) and rho_star >= 0.0):
        raise ContractViolation(f"rho_star must be finite and non-negative, got {rho_star!r}")
    i = 1 if i is None else i
    j = index.n if j is None else j
    if not 1 <= i <= j <= index.n:
        raise ContractViolation(f"range [{i}, {j}] is invalid for a curve with {index.n} vertices")
    mu = epsilon * rho_star if mu is None else mu
    verdict, audit, _, _ = _scan(index, q, epsilon, rho_star, mu, i, j, _early_exit_cap(index, q.n, epsilon), False)
    hausdorff_logger.debug(f"🔍 hausdorff-decide ρ*={rho_star} ε={epsilon} → {verdict.value}")
    return DecisionOutcome(verdict, audit)


def hausdorff_value(
    index: "CurveIndex", q, epsilon: float, i: Optional[int] = None, j: Optional[int] = None
) -> ValueResult:
    """
    (1±ε)-approximation of D_H(P[i, j], Q).

    λ is the exact directed distance from Q to P. A binary search over the
    endpoints of the rescaled 2-D TADD intervals and [λ, 2λ] brackets D_H
    between two consecutive endpoints; one more pass at the upper end records
    the smallest zero distance of every column, and ν is the largest of
    those and λ.
    """
    _check_query(index, epsilon)
    i = 1 if i is None else i
    j = index.n if j is None else j
    if not 1 <= i <= j <= index.n:
        raise ContractViolation(f"range [{i}, {j}] is invalid for a curve with {index.n} vertices")

    dec = index.nn
    lam = max(nearest_in_range(dec, q.point(b), i, j)[1] for b in range(1, q.n + 1))
    candidates = sorted({0.0, *scale_for_hausdorff(index.tadd_2d, lam).endpoints()})

    search_audit = QueryAudit()
    lo, hi = -1, len(candidates) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        outcome = hausdorff_decide(index, q, epsilon, candidates[mid], i=i, j=j)
        search_audit.merge(outcome.audit)
        if outcome.at_most:
            hi = mid
        else:
            lo = mid

    audit = QueryAudit()
    lower = candidates[lo] if lo >= 0 else 0.0
    upper = candidates[hi]
    if upper == 0.0:
        nu, case = 0.0, "zero"
    elif lower == 0.0:
        nu, case = upper, "smallest"
    else:
        verdict, audit, column_min, kept = _scan(
            index, q, epsilon, (1.0 + epsilon) * upper, epsilon * lower, i, j, None, True
        )
        if len(column_min) == len(kept):
            nu, case = max(lam, max(column_min.values())), "extracted"
        else:
            hausdorff_logger.warning(f"⚠️ extraction pass left {len(kept) - len(column_min)} columns without a zero")
            nu, case = upper, "bracket"

    log_query_event("hausdorff-value", {"epsilon": epsilon, "nu": f"{nu:.6g}", "case": case, "lambda": f"{lam:.6g}"})
    return ValueResult(nu, (lower, upper), lam, case, None, audit, search_audit)
