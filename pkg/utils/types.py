"""
This module contains the data classes and enums shared across the engine and the CLI.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

from utils.errors import ContractViolation

# A Euclidean point is a coordinate tuple, a graph point is a vertex id.
AmbientPoint = Union[Tuple[float, ...], int]


class SpaceKind(Enum):
    """
    Enum representing the kind of ambient space.

    Attributes:
        EUCLIDEAN (str)
        GRAPH (str)
    """

    EUCLIDEAN = "euclid"
    GRAPH = "graph"


class PNorm(Enum):
    """
    Enum representing the supported L_p norms.

    Attributes:
        P1 (str): Manhattan distance
        P2 (str): Euclidean distance
        PINF (str): Chebyshev distance
    """

    P1 = "p1"
    P2 = "p2"
    PINF = "pinf"

    @property
    def minkowski(self) -> float:
        """The Minkowski exponent, as scipy spatial trees expect it."""
        return {PNorm.P1: 1.0, PNorm.P2: 2.0, PNorm.PINF: math.inf}[self]

    @property
    def cdist_metric(self) -> str:
        """The matching metric name for ``scipy.spatial.distance.cdist``."""
        return {PNorm.P1: "cityblock", PNorm.P2: "euclidean", PNorm.PINF: "chebyshev"}[self]


class CurveEnd(Enum):
    """Which end of a curve an update touches."""

    HEAD = "head"
    TAIL = "tail"


@dataclass(frozen=True)
class EndUpdate:
    """
    One vertex attached to or removed from an end of a curve.

    Attributes:
        kind (str): "extend" or "truncate".
        end (CurveEnd): The end that changed.
        position (int): Exact translated position of the vertex that was added or removed.
    """

    kind: str
    end: CurveEnd
    position: int


class Verdict(Enum):
    """
    Outcome of a one-sided decision query.

    Attributes:
        AT_MOST (str): the distance is at most (1+ε)ρ
        GREATER_THAN (str): the distance exceeds ρ
    """

    AT_MOST = "AT_MOST_ONE_PLUS_EPS_RHO"
    GREATER_THAN = "GREATER_THAN_RHO"


@dataclass(frozen=True)
class QueryParams:
    """
    Inputs of a decision or value query.

    Attributes:
        epsilon (float): Approximation parameter, strictly between 0 and 1.
        rho (Optional[float]): Decision threshold; None for value queries.
        i (Optional[int]): First vertex of the queried subcurve (1-based), None for 1.
        j (Optional[int]): Last vertex of the queried subcurve (1-based), None for n.
    """

    epsilon: float
    rho: Optional[float] = None
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if not (isinstance(self.epsilon, (int, float)) and 0.0 < self.epsilon < 1.0):
            raise ContractViolation(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if self.rho is not None and not (math.isfinite(self.rho) and self.rho >= 0.0):
            raise ContractViolation(f"rho must be finite and non-negative, got {self.rho!r}")

    @property
    def half_eps_factor(self) -> float:
        """The factor (1 + ε/2)."""
        return 1.0 + 0.5 * self.epsilon

    @property
    def rho_star(self) -> float:
        """Relaxed threshold (1 + ε/2)·ρ."""
        return self.half_eps_factor * self._require_rho()

    @property
    def mu(self) -> float:
        """Simplification parameter ερ/6."""
        return self.epsilon * self._require_rho() / 6.0

    @property
    def alpha_max(self) -> float:
        """Largest oracle slack the decision procedure tolerates."""
        return self.epsilon / 6.0

    def resolve_range(self, n: int) -> Tuple[int, int]:
        """
        Resolve the subrange against a curve with n vertices.

        Raises:
            ContractViolation: when the range is empty or out of bounds.
        """
        i = 1 if self.i is None else self.i
        j = n if self.j is None else self.j
        if not 1 <= i <= j <= n:
            raise ContractViolation(f"subrange [{i}, {j}] is invalid for a curve with {n} vertices")
        return i, j

    def _require_rho(self) -> float:
        if self.rho is None:
            raise ContractViolation("rho is required for decision queries")
        return self.rho


@dataclass
class QueryAudit:
    """
    Work counters collected by a single query.

    Attributes:
        cells_pushed (int): Lattice cells pushed onto the search stack.
        oracle_calls (int): Perceived distances requested from the oracle.
        tree_node_visits (int): Simplification tree nodes visited.
        simplified_vertices (int): Vertices of the simplification enumerated.
        heap_pops (int): Blocked cells taken from the min-heap (value queries).
        rho_star_raises (int): Times the threshold was raised (value queries).
        rho_star_monotone (bool): False if the threshold ever decreased.
        zeroes_found (int): Zero cells located (Hausdorff queries).
        max_row_pushes (int): Largest number of stack pushes for one query vertex (Hausdorff).
        max_row_zeroes (int): Largest number of zeroes found for one query vertex (Hausdorff).
        decisions (int): Decision runs aggregated into this audit.
    """

    cells_pushed: int = 0
    oracle_calls: int = 0
    tree_node_visits: int = 0
    simplified_vertices: int = 0
    heap_pops: int = 0
    rho_star_raises: int = 0
    rho_star_monotone: bool = True
    zeroes_found: int = 0
    max_row_pushes: int = 0
    max_row_zeroes: int = 0
    decisions: int = 0

    def merge(self, other: "QueryAudit") -> None:
        """Accumulate the counters of another audit into this one."""
        self.cells_pushed += other.cells_pushed
        self.oracle_calls += other.oracle_calls
        self.tree_node_visits += other.tree_node_visits
        self.simplified_vertices += other.simplified_vertices
        self.heap_pops += other.heap_pops
        self.rho_star_raises += other.rho_star_raises
        self.rho_star_monotone = self.rho_star_monotone and other.rho_star_monotone
        self.zeroes_found += other.zeroes_found
        self.max_row_pushes = max(self.max_row_pushes, other.max_row_pushes)
        self.max_row_zeroes = max(self.max_row_zeroes, other.max_row_zeroes)
        self.decisions += other.decisions

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class DecisionOutcome:
    """
    Result of a decision query.

    Attributes:
        verdict (Verdict): One-sided answer.
        audit (QueryAudit): Counters of the run.
    """

    verdict: Verdict
    audit: QueryAudit = field(default_factory=QueryAudit)

    @property
    def at_most(self) -> bool:
        return self.verdict is Verdict.AT_MOST


@dataclass
class ValueResult:
    """
    Result of a value query.

    Attributes:
        nu (float): The approximate distance.
        bracket (Tuple[float, float]): Endpoints bracketing the distance after the binary search.
        lam (float): Lower bound λ found by the search.
        case (str): How the bracket was found (interval, gap, beyond, zero, smallest, extracted).
        C (Optional[float]): Start constant d°(p_i, q_1)/(1 + ε/2) of the Fréchet refinement.
        audit (QueryAudit): Counters of the refinement pass.
        search_audit (QueryAudit): Aggregated counters of the binary search decisions.
    """

    nu: float
    bracket: Tuple[float, float]
    lam: float
    case: str
    C: Optional[float] = None
    audit: QueryAudit = field(default_factory=QueryAudit)
    search_audit: QueryAudit = field(default_factory=QueryAudit)


@dataclass(frozen=True)
class PackednessReport:
    """
    Certified lower bound on the packedness constant of a curve.

    Attributes:
        c_lower (float): Largest ratio length-inside-ball / radius found.
        center (Tuple[float, ...]): Centre of the witness ball.
        radius (float): Radius of the witness ball.
    """

    c_lower: float
    center: Tuple[float, ...]
    radius: float


@dataclass(frozen=True)
class SimplifiedView:
    """
    Vertices of a μ-simplification of P[i, j].

    Attributes:
        indices (Tuple[int, ...]): Kept vertex indices, 1-based, strictly increasing.
        mu (float): The simplification parameter.
        truncated (bool): True if enumeration stopped at the cap.
        node_visits (int): Tree nodes visited while enumerating.
    """

    indices: Tuple[int, ...]
    mu: float
    truncated: bool = False
    node_visits: int = 0


@dataclass(frozen=True)
class ZeroBoundReport:
    """
    Outcome of checking a query's pushes against the zero bound.

    Attributes:
        bound (float): 8·(c·k/ε)·m.
        cells_pushed (int): Cells the query pushed.
        holds (bool): Whether cells_pushed ≤ bound.
    """

    bound: float
    cells_pushed: int
    holds: bool
