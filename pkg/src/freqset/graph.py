"""Threshold graphs over the pair matrix and an exact maximum-clique solver.

Graph(t) keeps an edge {i, j} exactly when count(i, j) / db_size >= t. The
comparison is done in integer arithmetic on an exact rational t, so raising t
can only remove edges and two runs can never disagree on an edge near the
threshold.

The solver is branch and bound over bitmask candidate sets with a greedy
coloring bound. Ties between maximum cliques resolve to the lexicographically
smallest vertex tuple, which keeps every downstream result reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import ClassVar, Iterable, Protocol, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    EmptyGraph,
    InvalidThreshold,
    InvalidVertex,
)
from .model import PairFrequencyMatrix

DEFAULT_EXPANSION_BUDGET = 5_000_000


def exact_threshold(t) -> Fraction:
    """Normalize a threshold to an exact rational in [0, 1].

    Floats convert through their exact binary value, so a dyadic threshold
    like 0.4375 stays 7/16 and integer comparisons against count ratios are
    drift-free.
    """
    try:
        frac = Fraction(t)
    except (ValueError, OverflowError, TypeError, ZeroDivisionError) as exc:
        raise InvalidThreshold(f"threshold {t!r} is not a finite number") from exc
    if not 0 <= frac <= 1:
        raise InvalidThreshold(f"threshold {t!r} outside [0, 1]")
    return frac


def _kept_mask(counts: np.ndarray, db_size: int, t: Fraction) -> np.ndarray:
    """Boolean mask over flat pair slots where count/db_size >= t, exactly."""
    num, den = t.numerator, t.denominator
    hi = int(counts.max(initial=0))
    if hi * den < 2**62 and num * db_size < 2**63:
        return counts.astype(np.int64) * den >= num * db_size
    rhs = num * db_size
    return np.fromiter((int(c) * den >= rhs for c in counts), dtype=bool, count=counts.size)


class ThresholdGraph:
    """Unweighted graph on item ids, adjacency stored as one bitmask per vertex."""

    __slots__ = ("k", "t", "_adj")

    def __init__(self, k: int, adjacency: Sequence[int], t: Fraction = Fraction(0)) -> None:
        if len(adjacency) != k:
            raise InvalidVertex(f"expected {k} adjacency masks, got {len(adjacency)}")
        self.k = k
        self.t = t
        self._adj = tuple(adjacency)

    @classmethod
    def from_edges(cls, k: int, edges: Iterable[tuple[int, int]], t=Fraction(0)) -> "ThresholdGraph":
        adj = [0] * k
        for i, j in edges:
            if i == j or not (0 <= i < k and 0 <= j < k):
                raise InvalidVertex(f"bad edge ({i}, {j}) for k={k}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(k, adj, exact_threshold(t))

    def _check(self, v: int) -> None:
        if not 0 <= v < self.k:
            raise InvalidVertex(f"vertex {v} outside 0..{self.k - 1}")

    def has_edge(self, i: int, j: int) -> bool:
        self._check(i)
        self._check(j)
        return i != j and bool(self._adj[i] >> j & 1)

    def neighbors_mask(self, v: int) -> int:
        self._check(v)
        return self._adj[v]

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self._adj) // 2

    def __repr__(self) -> str:
        return f"ThresholdGraph(k={self.k}, edges={self.edge_count()}, t={self.t})"


def threshold_graph(matrix: PairFrequencyMatrix, t) -> ThresholdGraph:
    """Build Graph(t) from a pair matrix: keep pairs with rel frequency >= t."""
    frac = exact_threshold(t)
    k = matrix.k
    adj = [0] * k
    if k >= 2:
        keep = _kept_mask(matrix.counts, matrix.db_size, frac)
        flat = np.nonzero(keep)[0]
        if flat.size:
            # row i owns the slot range [i*(2k-i-1)//2, +(k-1-i))
            row_starts = np.array([i * (2 * k - i - 1) // 2 for i in range(k + 1)], dtype=np.int64)
            rows = np.searchsorted(row_starts, flat, side="right") - 1
            cols = flat - row_starts[rows] + rows + 1
            for i, j in zip(rows.tolist(), cols.tolist()):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return ThresholdGraph(k, adj, frac)


def is_clique(graph: ThresholdGraph, vertices: Iterable[int]) -> bool:
    """True iff every pair in ``vertices`` is adjacent; size <= 1 qualifies."""
    vs = sorted(set(vertices))
    for v in vs:
        graph._check(v)
    adj = graph._adj
    return all(adj[i] >> j & 1 for i, j in combinations(vs, 2))


@dataclass(frozen=True)
class CliqueResult:
    """A clique as a sorted vertex tuple."""

    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


class _Search:
    """Shared branch-and-bound machinery with a node-expansion budget."""

    __slots__ = ("adj", "budget", "expansions", "best")

    def __init__(self, adj: Sequence[int], budget: int) -> None:
        self.adj = adj
        self.budget = budget
        self.expansions = 0
        self.best = 0

    def _tick(self) -> None:
        self.expansions += 1
        if self.expansions > self.budget:
            raise BudgetExceeded(f"clique search exceeded {self.budget} node expansions")

    def _color_order(self, p: int) -> tuple[list[int], list[int]]:
        """Greedy coloring of candidate set ``p``; bounds come out nondecreasing."""
        adj = self.adj
        order: list[int] = []
        bounds: list[int] = []
        color = 0
        rest = p
        while rest:
            color += 1
            cand = rest
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand = (cand ^ low) & ~adj[v]
                rest ^= low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def max_size(self, p: int) -> int:
        self.best = 0
        self._grow(0, p)
        return self.best

    def _grow(self, size: int, p: int) -> None:
        self._tick()
        adj = self.adj
        order, bounds = self._color_order(p)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= self.best:
                return
            v = order[idx]
            rest = p & adj[v]
            if rest:
                self._grow(size + 1, rest)
            elif size + 1 > self.best:
                self.best = size + 1
            p &= ~(1 << v)

    def exists(self, p: int, target: int) -> bool:
        """Decision query: does ``p`` contain a clique of at least ``target`` vertices?"""
        if target <= 0:
            return True
        return self._probe(0, p, target)

    def _probe(self, size: int, p: int, target: int) -> bool:
        self._tick()
        adj = self.adj
        order, bounds = self._color_order(p)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] < target:
                return False
            if size + 1 >= target:
                return True
            v = order[idx]
            if self._probe(size + 1, p & adj[v], target):
                return True
            p &= ~(1 << v)
        return False


def max_clique_exact(
    graph: ThresholdGraph, max_expansions: int = DEFAULT_EXPANSION_BUDGET
) -> CliqueResult:
    """Exact maximum clique, returned as the lexicographically smallest witness.

    Phase one finds the maximum size; phase two fixes vertices in ascending id
    order, keeping each one that still admits a completion. Raises
    BudgetExceeded once the combined search passes ``max_expansions`` nodes.
    """
    k = graph.k
    if k == 0:
        raise EmptyGraph("maximum clique of a graph with no vertices")
    adj = graph._adj
    search = _Search(adj, max_expansions)
    full = (1 << k) - 1
    best = search.max_size(full)

    chosen: list[int] = []
    cand = full
    need = best
    v = 0
    while need and v < k:
        bit = 1 << v
        if cand & bit and search.exists(cand & adj[v], need - 1):
            chosen.append(v)
            cand &= adj[v]
            need -= 1
        else:
            cand &= ~bit
        v += 1
    if need:
        raise RuntimeError("clique reconstruction lost the optimum; this is a bug")
    return CliqueResult(tuple(chosen))


class CliqueSolver(Protocol):
    """Contract shared by the exact backend and the annealing backend."""

    name: str

    def solve(self, graph: ThresholdGraph) -> CliqueResult: ...


@dataclass(frozen=True)
class ExactCliqueSolver:
    """Backend wrapper around ``max_clique_exact``."""

    max_expansions: int = DEFAULT_EXPANSION_BUDGET
    name: ClassVar[str] = "exact"
    exact: ClassVar[bool] = True

    def solve(self, graph: ThresholdGraph) -> CliqueResult:
        return max_clique_exact(graph, self.max_expansions)
