"""Exact decision procedures for equitable and plain proper k-colorability.

Backtracking over vertices in descending-degree order (degeneracy
tie-break), with hard per-class size counters for the equitable variant
so the search tree is pruned exactly to balanced leaves.  Budgets bound
nodes and wall-clock time; running out is a third verdict, never
conflated with a proven No.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional

from .coloring import EquitableColoring, Partition, verify_equitable_k_coloring
from .graph import Graph

__all__ = [
    "Verdict",
    "SolveBudget",
    "SolveStats",
    "SolveOutcome",
    "decide_equitable",
    "decide_proper",
    "DEFAULT_BUDGET",
]


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SolveBudget:
    """Search budget; exhaustion is reported distinctly from No."""

    node_limit: int = 10_000_000
    time_limit: float = 60.0

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = SolveBudget()


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    max_depth: int
    seconds: float


@dataclass(frozen=True)
class SolveOutcome:
    verdict: Verdict
    coloring: Optional[EquitableColoring]
    stats: SolveStats
    partition: Optional[Partition] = None  # Yes payload for plain proper solves
    trace: Optional[object] = None  # MethodTrace for the constructive solver

    @property
    def is_yes(self) -> bool:
        return self.verdict is Verdict.YES


class BudgetExceeded(Exception):
    pass


class Clock:
    """Mutable node/time accounting shared across one solve tree."""

    __slots__ = ("nodes", "node_limit", "deadline", "max_depth", "started")

    def __init__(self, budget: SolveBudget):
        self.nodes = 0
        self.node_limit = budget.node_limit
        self.started = time.monotonic()
        self.deadline = self.started + budget.time_limit
        self.max_depth = 0

    def charge(self, depth: int) -> None:
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if self.nodes > self.node_limit:
            raise BudgetExceeded
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded

    def stats(self) -> SolveStats:
        return SolveStats(self.nodes, self.max_depth, time.monotonic() - self.started)


def _search_order(g: Graph) -> list[int]:
    """Descending degree, ties broken by core number (descending), then id."""
    n = g.n
    degs = list(g.degrees())
    core = degs[:]
    work = degs[:]
    alive = set(range(n))
    while alive:
        v = min(alive, key=lambda u: (work[u], u))
        core[v] = work[v]
        alive.discard(v)
        for w in g.neighbors(v):
            if w in alive and work[w] > work[v]:
                work[w] -= 1
    return sorted(range(n), key=lambda v: (-degs[v], -core[v], v))


def _assign_search(
    g: Graph,
    k: int,
    caps: Optional[list[int]],
    clock: Clock,
) -> Optional[list[int]]:
    """Backtracking core; returns per-vertex class ids or None.

    Empty classes of equal capacity are interchangeable, so a vertex may
    only open the lowest-indexed empty class within each capacity group.
    """
    n = g.n
    order = _search_order(g)
    bits = g.adjacency_bits()
    class_bits = [0] * k
    used = [0] * k
    assignment = [-1] * n

    cap_of = caps if caps is not None else [n] * k

    def first_empty_per_group() -> set[int]:
        allowed: set[int] = set()
        seen_caps: set[int] = set()
        for c in range(k):
            if used[c] == 0 and cap_of[c] not in seen_caps:
                allowed.add(c)
                seen_caps.add(cap_of[c])
        return allowed

    def place(idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        vb = bits[v]
        open_new = first_empty_per_group()
        for c in range(k):
            if used[c] >= cap_of[c]:
                continue
            if used[c] == 0 and c not in open_new:
                continue
            if class_bits[c] & vb:
                continue
            clock.charge(idx + 1)
            class_bits[c] |= 1 << v
            used[c] += 1
            assignment[v] = c
            if place(idx + 1):
                return True
            class_bits[c] &= ~(1 << v)
            used[c] -= 1
            assignment[v] = -1
        return False

    return assignment if place(0) else None


def _capacities(n: int, k: int) -> list[int]:
    big = -(-n // k)  # ceil
    small = n // k
    n_big = n % k
    return [big] * n_big + [small] * (k - n_big)


def _outcome_from_assignment(
    g: Graph, k: int, assignment: Optional[list[int]], clock: Clock, equitable: bool
) -> SolveOutcome:
    if assignment is None:
        return SolveOutcome(Verdict.NO, None, clock.stats())
    classes: list[set[int]] = [set() for _ in range(k)]
    for v, c in enumerate(assignment):
        classes[c].add(v)
    partition = Partition.make(classes, g.n)
    if equitable:
        violation = verify_equitable_k_coloring(g, partition, k)
        assert violation is None, f"solver produced invalid coloring: {violation}"
        return SolveOutcome(
            Verdict.YES, EquitableColoring(partition, k), clock.stats(), partition
        )
    from .coloring import is_proper

    assert is_proper(g, partition), "solver produced improper coloring"
    return SolveOutcome(Verdict.YES, None, clock.stats(), partition)


def decide_equitable(
    g: Graph, k: int, budget: SolveBudget = DEFAULT_BUDGET, clock: Optional[Clock] = None
) -> SolveOutcome:
    """Does g admit an equitable k-coloring?  Yes carries a verified coloring.

    Class capacities are fixed a priori: n mod k classes of size ceil(n/k),
    the rest floor(n/k).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    clock = clock or Clock(SolveBudget(budget.node_limit, budget.time_limit))
    caps = _capacities(g.n, k)
    try:
        assignment = _assign_search(g, k, caps, clock)
    except BudgetExceeded:
        return SolveOutcome(Verdict.EXHAUSTED, None, clock.stats())
    return _outcome_from_assignment(g, k, assignment, clock, equitable=True)


def decide_proper(
    g: Graph, m: int, budget: SolveBudget = DEFAULT_BUDGET, clock: Optional[Clock] = None
) -> SolveOutcome:
    """Does g admit a plain proper m-coloring (no size constraints)?"""
    if m < 1:
        raise ValueError("m must be at least 1")
    clock = clock or Clock(SolveBudget(budget.node_limit, budget.time_limit))
    try:
        assignment = _assign_search(g, m, None, clock)
    except BudgetExceeded:
        return SolveOutcome(Verdict.EXHAUSTED, None, clock.stats())
    return _outcome_from_assignment(g, m, assignment, clock, equitable=False)
