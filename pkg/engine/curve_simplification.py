"""
Prefix-length sum tree answering "first N vertices of P[i, j]^μ" queries,
and the dynamic curve it is kept in step with.

Widths are exact fixed-point integers (see ``curve_model.to_fixed``), so
subtree sums never drift and a tree that went through any sequence of
updates holds exactly the sums of a freshly built one.

The tree is an array-backed segment tree over a power-of-two number of slots.
Edges occupy a contiguous run of slots; slots outside the run hold 0. Updates
at either end write one slot and recompute its ancestors from their children.
"""

import bisect
import math
from typing import Generic, Iterator, List, Optional, Sequence, Tuple, TypeVar

from engine.curve_model import Curve, from_fixed, to_fixed
from utils.errors import ContractViolation, CurveUnderflowError
from utils.logs import get_logger
from utils.types import AmbientPoint, CurveEnd, SimplifiedView, SpaceKind

simplify_logger = get_logger("simplify")

T = TypeVar("T")


def _next_power_of_two(value: int) -> int:
    return 1 << max(value - 1, 0).bit_length()


class CenteredBuffer(Generic[T]):
    """List with amortized O(1) pushes and pops at both ends and O(1) indexing."""

    def __init__(self, items: Sequence[T] = ()):
        self._count = len(items)
        capacity = _next_power_of_two(max(2 * self._count, 2))
        self._start = (capacity - self._count) // 2
        self._items: List[Optional[T]] = [None] * capacity
        self._items[self._start : self._start + self._count] = list(items)

    def __len__(self) -> int:
        return self._count

    def __getitem__(self, k: int) -> T:
        if not 0 <= k < self._count:
            raise IndexError(k)
        return self._items[self._start + k]

    def to_list(self) -> List[T]:
        return self._items[self._start : self._start + self._count]

    def bisect_left(self, value: T, lo: int, hi: int) -> int:
        """First index in [lo, hi) whose item is not below value; items must be sorted."""
        return bisect.bisect_left(self._items, value, self._start + lo, self._start + hi) - self._start

    def _regrow(self) -> None:
        self.__init__(self.to_list())

    def append(self, item: T) -> None:
        if self._start + self._count == len(self._items):
            self._regrow()
        self._items[self._start + self._count] = item
        self._count += 1

    def appendleft(self, item: T) -> None:
        if self._start == 0:
            self._regrow()
        self._start -= 1
        self._items[self._start] = item
        self._count += 1

    def pop(self) -> T:
        self._count -= 1
        item, self._items[self._start + self._count] = self._items[self._start + self._count], None
        return item

    def popleft(self) -> T:
        item, self._items[self._start] = self._items[self._start], None
        self._start += 1
        self._count -= 1
        return item


class DynamicCurve:
    """
    Curve that can grow or shrink at both ends.

    Vertex positions are stored translated: ``positions[k]`` is the exact
    fixed-point value M_k with ℓ(P[a, b]) = M_b - M_a. A head extension
    prepends M_1 - w instead of shifting every stored value.
    """

    def __init__(self, curve: Curve, head_offset: int = 0):
        self.space: SpaceKind = curve.space
        self.alpha: float = curve.alpha
        self._points = CenteredBuffer(list(curve.points))
        self._edges = CenteredBuffer(list(curve.edge_lengths))
        self._positions = CenteredBuffer([head_offset + m for m in curve.exact_positions()])

    @property
    def n(self) -> int:
        return len(self._points)

    @property
    def head_offset(self) -> int:
        """Exact translation M_1 of the first vertex."""
        return self._positions[0]

    def point(self, i: int) -> AmbientPoint:
        return self._points[i - 1]

    def edge_length(self, i: int) -> float:
        return self._edges[i - 1]

    @property
    def points(self) -> List[AmbientPoint]:
        return self._points.to_list()

    @property
    def edge_lengths(self) -> List[float]:
        return self._edges.to_list()

    def position(self, i: int) -> int:
        """Translated exact position M_i."""
        return self._positions[i - 1]

    def exact_positions(self) -> List[int]:
        """Translated exact positions M_1..M_n."""
        return self._positions.to_list()

    def prefix_lengths(self) -> List[float]:
        """Effective λ_1..λ_n, i.e. positions relative to the first vertex."""
        base = self.head_offset
        return [from_fixed(m - base) for m in self._positions.to_list()]

    def extend(self, end: CurveEnd, point: AmbientPoint, edge_length: float) -> None:
        width = to_fixed(edge_length)
        if end is CurveEnd.TAIL:
            self._positions.append(self._positions[len(self._positions) - 1] + width)
            self._points.append(point)
            self._edges.append(float(edge_length))
        else:
            self._positions.appendleft(self._positions[0] - width)
            self._points.appendleft(point)
            self._edges.appendleft(float(edge_length))

    def truncate(self, end: CurveEnd) -> None:
        if self.n < 2:
            raise CurveUnderflowError("cannot truncate a curve with a single vertex")
        if end is CurveEnd.TAIL:
            self._positions.pop()
            self._points.pop()
            self._edges.pop()
        else:
            self._positions.popleft()
            self._points.popleft()
            self._edges.popleft()

    def snapshot(self) -> Curve:
        """The current state as an immutable curve."""
        return Curve.from_parts(self.points, self.edge_lengths, self.space, self.alpha)


class SimplificationTree:
    """
    Sum segment tree over the fixed-point edge widths of a curve.

    Slot ``start + e - 1`` holds the width of edge e (from p_e to p_{e+1}).
    The capacity stays within [count, 4·count] so the height is at most
    ceil(log2 n) + 2.
    """

    def __init__(self, widths: Sequence[int] = ()):
        self._layout(list(widths), centered=False)

    def _layout(self, widths: List[int], centered: bool) -> None:
        count = len(widths)
        if centered:
            capacity = _next_power_of_two(2 * count + 2)
            start = (capacity - count) // 2
        else:
            capacity = _next_power_of_two(max(count, 1))
            start = 0
        sums = [0] * (2 * capacity)
        sums[capacity + start : capacity + start + count] = widths
        for node in range(capacity - 1, 0, -1):
            sums[node] = sums[2 * node] + sums[2 * node + 1]
        self._capacity = capacity
        self._start = start
        self._count = count
        self._sums = sums

    @property
    def count(self) -> int:
        """Number of edges (leaves in use)."""
        return self._count

    @property
    def total(self) -> int:
        return self._sums[1]

    @property
    def height(self) -> int:
        return self._capacity.bit_length() - 1

    def widths(self) -> List[int]:
        base = self._capacity + self._start
        return self._sums[base : base + self._count]

    def _set(self, slot: int, width: int) -> None:
        node = self._capacity + slot
        self._sums[node] = width
        node //= 2
        while node:
            self._sums[node] = self._sums[2 * node] + self._sums[2 * node + 1]
            node //= 2

    def push_back(self, width: int) -> None:
        if self._start + self._count == self._capacity:
            self._layout(self.widths(), centered=True)
        self._set(self._start + self._count, width)
        self._count += 1

    def push_front(self, width: int) -> None:
        if self._start == 0:
            self._layout(self.widths(), centered=True)
        self._start -= 1
        self._set(self._start, width)
        self._count += 1

    def pop_back(self) -> None:
        self._count -= 1
        self._set(self._start + self._count, 0)
        self._maybe_shrink()

    def pop_front(self) -> None:
        self._set(self._start, 0)
        self._start += 1
        self._count -= 1
        self._maybe_shrink()

    def _maybe_shrink(self) -> None:
        if 4 * self._count < self._capacity and self._capacity > 2:
            self._layout(self.widths(), centered=True)

    def prefix(self, edges: int) -> Tuple[int, int]:
        """
        Sum of the widths of edges 1..edges.

        Returns:
            (sum, nodes visited)
        """
        if edges <= 0:
            return 0, 0
        bound = self._start + edges  # slots [0, bound)
        if bound >= self._capacity:
            return self._sums[1], 1
        node, lo, size, acc, visits = 1, 0, self._capacity, 0, 1
        while size > 1:
            size //= 2
            if bound >= lo + size:
                acc += self._sums[2 * node]
                node, lo = 2 * node + 1, lo + size
            else:
                node = 2 * node
            visits += 1
        return acc, visits

    def find(self, target: int) -> Tuple[Optional[int], int, int]:
        """
        First edge whose cumulative width exceeds target.

        Returns:
            (edge index or None, cumulative width through that edge, nodes visited)
        """
        if self._sums[1] <= target:
            return None, self._sums[1], 1
        node, acc, visits = 1, 0, 1
        while node < self._capacity:
            left = 2 * node
            if acc + self._sums[left] > target:
                node = left
            else:
                acc += self._sums[left]
                node = left + 1
            visits += 1
        acc += self._sums[node]
        return node - self._capacity - self._start + 1, acc, visits


class LazySimplification:
    """
    Vertices of P[i, j]^μ, enumerated only as far as callers ask.

    ``get(a)`` returns the a-th kept vertex (0-based) or None past the end.
    """

    def __init__(self, tree: SimplificationTree, mu: float, i: int, j: int):
        if not (math.isfinite(mu) and mu >= 0.0):
            raise ContractViolation(f"mu must be finite and non-negative, got {mu!r}")
        self.mu = mu
        self.i = i
        self.j = j
        self.node_visits = 0
        self._tree = tree
        self._mu_fixed = to_fixed(mu)
        self._indices = [i]
        self._done = i == j
        self._base: Optional[int] = None  # W(x - 1) for the last kept x

    @property
    def enumerated(self) -> int:
        return len(self._indices)

    @property
    def exhausted(self) -> bool:
        return self._done

    def _advance(self) -> None:
        if self._base is None:
            self._base, visits = self._tree.prefix(self.i - 1)
            self.node_visits += visits
        edge, through, visits = self._tree.find(self._base + self._mu_fixed)
        self.node_visits += visits
        # next kept vertex is edge + 1, unless that reaches or passes j
        if edge is None or edge + 1 >= self.j:
            self._indices.append(self.j)
            self._done = True
        else:
            self._indices.append(edge + 1)
            self._base = through

    def get(self, a: int) -> Optional[int]:
        while a >= len(self._indices) and not self._done:
            self._advance()
        return self._indices[a] if a < len(self._indices) else None

    def __iter__(self) -> Iterator[int]:
        a = 0
        while True:
            index = self.get(a)
            if index is None:
                return
            yield index
            a += 1


def build_tree(curve) -> SimplificationTree:
    """Sum tree over the edge widths of curve (a Curve or DynamicCurve)."""
    return SimplificationTree([to_fixed(e) for e in curve.edge_lengths])


def iter_simplification(tree: SimplificationTree, mu: float, i: int, j: int) -> LazySimplification:
    """Lazy enumeration of P[i, j]^μ."""
    return LazySimplification(tree, mu, i, j)


def simplify(tree: SimplificationTree, curve, mu: float, i: int, j: int, cap: Optional[int] = None) -> SimplifiedView:
    """
    Vertices of the μ-simplification of P[i, j].

    Consecutive kept vertices x < y satisfy ℓ(P[x, y-1]) ≤ μ < ℓ(P[x, y]),
    except that j is always the last vertex. Enumeration stops after cap
    vertices, setting the truncated flag when more remain.

    Raises:
        ContractViolation: on an invalid range, negative μ or cap < 1.
    """
    if not 1 <= i <= j <= curve.n:
        raise ContractViolation(f"range [{i}, {j}] is invalid for a curve with {curve.n} vertices")
    if cap is not None and cap < 1:
        raise ContractViolation(f"cap must be positive, got {cap}")
    lazy = LazySimplification(tree, mu, i, j)
    indices = []
    for index in lazy:
        indices.append(index)
        if cap is not None and len(indices) == cap:
            break
    return SimplifiedView(tuple(indices), mu, not lazy.exhausted, lazy.node_visits)


def extend(tree: SimplificationTree, curve: DynamicCurve, end: CurveEnd, new_point: AmbientPoint, new_edge_length: float) -> None:
    """Attach a vertex at one end of the curve and keep the tree in step."""
    if not (math.isfinite(new_edge_length) and new_edge_length >= 0.0):
        raise ContractViolation(f"edge length must be finite and non-negative, got {new_edge_length!r}")
    curve.extend(end, new_point, new_edge_length)
    width = to_fixed(new_edge_length)
    if end is CurveEnd.TAIL:
        tree.push_back(width)
    else:
        tree.push_front(width)
    simplify_logger.debug(f"♻️ extend-{end.value}: n={curve.n}, tree height {tree.height}")


def truncate(tree: SimplificationTree, curve: DynamicCurve, end: CurveEnd) -> None:
    """
    Remove the vertex at one end of the curve.

    Raises:
        CurveUnderflowError: if the curve has a single vertex.
    """
    curve.truncate(end)
    if end is CurveEnd.TAIL:
        tree.pop_back()
    else:
        tree.pop_front()
    simplify_logger.debug(f"♻️ truncate-{end.value}: n={curve.n}, tree height {tree.height}")
