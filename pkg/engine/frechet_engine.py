"""
Approximate discrete Fréchet queries against a preprocessed curve.

The free-space matrix between the μ-simplification of P[i, j] and Q is never
materialised: cells are evaluated on demand while a depth-first search walks
the zero cells (perceived distance ≤ ρ*) from the top-left corner.
"""

import bisect
import heapq
import math
from typing import Callable, Dict, List, Optional, Set, Tuple

import numpy as np

from engine.curve_index import CurveIndex
from engine.curve_model import from_fixed
from engine.curve_simplification import LazySimplification
from engine.metric_oracles import CountingOracle, DistanceOracle
from utils.errors import BudgetExceededError, ContractViolation
from utils.logs import get_logger, log_function_call, log_query_event
from utils.read_config import exact_budget
from utils.types import DecisionOutcome, QueryAudit, QueryParams, ValueResult, Verdict, ZeroBoundReport

engine_logger = get_logger("frechet")

# (a+1, b), (a, b+1), (a+1, b+1)
NEIGHBOURS = ((1, 0), (0, 1), (1, 1))
# Value searches stop once the certified radii are within this ratio.
BRACKET_RATIO = 2.0 ** (1.0 / 16.0)

Cell = Tuple[int, int]


def _check_oracle(oracle: DistanceOracle, params: QueryParams) -> None:
    if oracle.alpha > params.alpha_max:
        raise ContractViolation(
            f"oracle slack {oracle.alpha} exceeds ε/6 = {params.alpha_max} for ε = {params.epsilon}"
        )


@log_function_call
def exact_discrete_frechet(p, q, oracle: DistanceOracle, budget: Optional[int] = None) -> float:
    """
    Exact discrete Fréchet distance by the O(nm) dynamic program.

    Raises:
        ContractViolation: if the oracle is approximate.
        BudgetExceededError: if n·m exceeds the budget.
    """
    if not oracle.exact:
        raise ContractViolation("the exact baseline needs an exact oracle")
    budget = exact_budget() if budget is None else budget
    if p.n * q.n > budget:
        raise BudgetExceededError(p.n, q.n, budget)

    dist = oracle.pairwise(list(p.points), list(q.points))
    n, m = dist.shape
    ret = np.empty((n, m), dtype=np.float64)
    ret[0, 0] = dist[0, 0]
    for a in range(1, n):
        ret[a, 0] = max(ret[a - 1, 0], dist[a, 0])
    for b in range(1, m):
        ret[0, b] = max(ret[0, b - 1], dist[0, b])
    for a in range(1, n):
        for b in range(1, m):
            ret[a, b] = max(min(ret[a - 1, b], ret[a, b - 1], ret[a - 1, b - 1]), dist[a, b])
    return float(ret[-1, -1])


def _walk_zero_cells(
    index: CurveIndex, kept: LazySimplification, q, rho_star: float, oracle: CountingOracle, audit: QueryAudit
) -> Verdict:
    """Depth-first search over zero cells from (0, 0); AT_MOST iff the last cell is reached."""
    m = q.n
    curve = index.curve
    if oracle.distance(curve.point(kept.get(0)), q.point(1)) > rho_star:
        return Verdict.GREATER_THAN
    audit.cells_pushed += 1
    if kept.exhausted and m == 1:
        return Verdict.AT_MOST

    stack: List[Cell] = [(0, 0)]
    pushed: Set[Cell] = {(0, 0)}
    blocked: Set[Cell] = set()
    while stack:
        a, b = stack.pop()
        for da, db in NEIGHBOURS:
            cell = (a + da, b + db)
            if cell[1] >= m or cell in pushed or cell in blocked:
                continue
            vertex = kept.get(cell[0])
            if vertex is None:
                continue
            if oracle.distance(curve.point(vertex), q.point(cell[1] + 1)) > rho_star:
                blocked.add(cell)
                continue
            pushed.add(cell)
            stack.append(cell)
            audit.cells_pushed += 1
            if vertex == kept.j and cell[1] == m - 1:
                return Verdict.AT_MOST
    return Verdict.GREATER_THAN


def decide(index: CurveIndex, q, params: QueryParams, oracle: Optional[DistanceOracle] = None) -> DecisionOutcome:
    """
    One-sided decision for D_F(P[i, j], Q) against ρ.

    AT_MOST means D_F ≤ (1+ε)ρ; GREATER_THAN means D_F > ρ. Both may hold.

    Args:
        index: Preprocessed P.
        q: Query curve.
        params: ε, ρ and the optional subrange.
        oracle: Perceived-distance oracle for the query; defaults to the index oracle.
    """
    oracle = oracle or index.oracle
    _check_oracle(oracle, params)
    i, j = params.resolve_range(index.n)
    counting = CountingOracle(oracle)
    audit = QueryAudit(decisions=1)
    kept = LazySimplification(index.tree, params.mu, i, j)
    verdict = _walk_zero_cells(index, kept, q, params.rho_star, counting, audit)
    audit.oracle_calls = counting.calls
    audit.tree_node_visits = kept.node_visits
    audit.simplified_vertices = kept.enumerated
    engine_logger.debug(f"🔍 decide ρ={params.rho} ε={params.epsilon} [{i}, {j}] → {verdict.value}")
    return DecisionOutcome(verdict, audit)


def _move_rho_star(audit: QueryAudit, rho_star: float, proposed: float) -> float:
    """Move ρ* to proposed, counting raises and flagging a decrease in audit."""
    if proposed < rho_star:
        audit.rho_star_monotone = False
    elif proposed > rho_star:
        audit.rho_star_raises += 1
    return proposed


def _find_approximation(
    index: CurveIndex, q, epsilon: float, lam: float, i: int, j: int, oracle: DistanceOracle
) -> Tuple[float, float, QueryAudit]:
    """
    Refine a lower bound λ into the returned approximation.

    Blocked cells wait in a min-heap; when the search stalls the cheapest one
    is opened, raising ρ* to (1+ε/2) times its value if needed.

    Returns:
        (ν, C, audit)
    """
    half = 1.0 + 0.5 * epsilon
    counting = CountingOracle(oracle)
    audit = QueryAudit()
    kept = LazySimplification(index.tree, epsilon * lam / 6.0, i, j)
    curve = index.curve
    m = q.n

    start = counting.distance(curve.point(i), q.point(1))
    c_start = start / half
    rho_star = max(half * max(c_start, lam), start)

    def is_target(vertex: int, b: int) -> bool:
        return vertex == j and b == m - 1

    stack: List[Cell] = [(0, 0)]
    pushed: Set[Cell] = {(0, 0)}
    blocked: Dict[Cell, float] = {}
    heap: List[Tuple[float, int, int]] = []
    audit.cells_pushed = 1
    done = kept.exhausted and m == 1

    while not done:
        while stack and not done:
            a, b = stack.pop()
            for da, db in NEIGHBOURS:
                cell = (a + da, b + db)
                if cell[1] >= m or cell in pushed or cell in blocked:
                    continue
                vertex = kept.get(cell[0])
                if vertex is None:
                    continue
                value = counting.distance(curve.point(vertex), q.point(cell[1] + 1))
                if value > rho_star:
                    blocked[cell] = value
                    heapq.heappush(heap, (value, cell[0], cell[1]))
                    continue
                pushed.add(cell)
                stack.append(cell)
                audit.cells_pushed += 1
                if is_target(vertex, cell[1]):
                    done = True
                    break
        if done:
            break

        if not heap:
            raise RuntimeError("free-space search stalled with no blocked cell left")
        value, a, b = heapq.heappop(heap)
        audit.heap_pops += 1
        if value > rho_star:
            rho_star = _move_rho_star(audit, rho_star, half * value)
        cell = (a, b)
        pushed.add(cell)
        stack.append(cell)
        audit.cells_pushed += 1
        done = is_target(kept.get(a), b)

    audit.oracle_calls = counting.calls
    audit.tree_node_visits = kept.node_visits
    audit.simplified_vertices = kept.enumerated
    return rho_star / half, c_start, audit


def _length_bound(index: CurveIndex, q, i: int, j: int, counting: CountingOracle) -> float:
    """d(p_i, q_1) + ℓ(P[i, j]) + ℓ(Q), an upper bound on D_F(P[i, j], Q)."""
    curve = index.curve
    along_p = from_fixed(curve.position(j) - curve.position(i))
    return counting.distance(curve.point(i), q.point(1)) + along_p + q.prefix_lengths[-1]


def _gallop(probe: Callable[[float], bool], start: float, floor: float) -> Tuple[Optional[float], float]:
    """
    Radii greater < at_most ≤ 2·greater answered GREATER_THAN and AT_MOST.

    Halves (or doubles) from start until the answer flips. Halving stops
    below floor, leaving greater as None.
    """
    if start <= 0.0:
        return None, 0.0
    if not probe(start):
        greater = start
        while not probe(2.0 * greater):
            greater *= 2.0
        return greater, 2.0 * greater
    at_most = start
    while at_most / 2.0 >= floor:
        if not probe(at_most / 2.0):
            return at_most / 2.0, at_most
        at_most /= 2.0
    return None, at_most


def _narrow(greater: Optional[float], at_most: float) -> bool:
    return greater is not None and at_most <= BRACKET_RATIO * greater


def value(index: CurveIndex, q, params: QueryParams, oracle: Optional[DistanceOracle] = None) -> ValueResult:
    """
    (1±ε)-approximation of D_F(P[i, j], Q).

    A doubling search started from d(p_i, q_1) + ℓ(P[i, j]) + ℓ(Q) brackets
    the distance within a factor 2; a binary search over the endpoints of the
    rescaled 1-TADD intervals inside the bracket then narrows it to
    BRACKET_RATIO, with geometric bisection where no endpoint is left. λ is
    the largest radius answered GREATER_THAN and the free-space search refines
    it into ν. The number of decisions does not grow with n.

    Args:
        index: Preprocessed P.
        q: Query curve.
        params: ε and the optional subrange; ρ is ignored.
        oracle: Perceived-distance oracle for the query; defaults to the index oracle.
    """
    oracle = oracle or index.oracle
    _check_oracle(oracle, params)
    i, j = params.resolve_range(index.n)
    epsilon = params.epsilon

    endpoints, lefts, reach = index.frechet_endpoints(epsilon)
    search_audit = QueryAudit()

    def probe(rho: float) -> bool:
        outcome = decide(index, q, QueryParams(epsilon, rho, i, j), oracle)
        search_audit.merge(outcome.audit)
        return outcome.at_most

    counting = CountingOracle(oracle)
    start = _length_bound(index, q, i, j, counting)
    search_audit.oracle_calls += counting.calls
    greater, at_most = _gallop(probe, start, endpoints[1] if len(endpoints) > 1 else math.inf)

    lo = bisect.bisect_right(endpoints, greater) - 1 if greater is not None else -1
    hi = bisect.bisect_left(endpoints, at_most)
    while hi - lo > 1 and not _narrow(greater, at_most):
        mid = (lo + hi) // 2
        if probe(endpoints[mid]):
            hi, at_most = mid, endpoints[mid]
        else:
            lo, greater = mid, endpoints[mid]
    while greater is not None and greater > 0.0 and not _narrow(greater, at_most):
        mid = math.sqrt(greater * at_most)
        if probe(mid):
            at_most = mid
        else:
            greater = mid

    lam = greater if greater is not None else 0.0
    lower = endpoints[lo] if lo >= 0 else 0.0
    upper = endpoints[hi] if hi < len(endpoints) else math.inf
    if hi == len(endpoints):
        case = "beyond"
    elif lo >= 0 and reach[bisect.bisect_right(lefts, lower) - 1] >= upper:
        case = "interval"
    else:
        case = "gap"

    nu, c_start, audit = _find_approximation(index, q, epsilon, lam, i, j, oracle)
    log_query_event(
        "value",
        {
            "epsilon": epsilon,
            "i": i,
            "j": j,
            "nu": f"{nu:.6g}",
            "case": case,
            "decisions": search_audit.decisions,
            "cells_pushed": audit.cells_pushed,
        },
    )
    return ValueResult(nu, (lower, upper), lam, case, c_start, audit, search_audit)


def zero_bound(c: float, k: int, epsilon: float, m: int) -> float:
    """Upper bound 8·(c·k/ε)·m on the zero cells a query may push."""
    return 8.0 * (c * k / epsilon) * m


def audit_zero_bound(audit: QueryAudit, c: float, k: int, epsilon: float, m: int) -> ZeroBoundReport:
    """Compare the cells a run pushed with the zero bound for packedness c."""
    bound = zero_bound(c, k, epsilon, m)
    report = ZeroBoundReport(bound=bound, cells_pushed=audit.cells_pushed, holds=audit.cells_pushed <= bound)
    if not report.holds:
        engine_logger.warning(f"⚠️ {audit.cells_pushed} cells pushed, zero bound is {bound:.1f}")
    return report
