"""Brute-force path counting on CFGs, used as ground truth.

Paths are arc-simple: a path may revisit a node but never reuses an arc.
Counting such paths is #P-complete in general, so every entry point takes
an :class:`OracleBudget` and raises :class:`BudgetExceeded` rather than run
for ever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .cfg import Cfg, NodeId


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 64
    max_paths: int = 10**7
    max_steps: int = 10**8

    def __post_init__(self):
        if min(self.max_nodes, self.max_paths, self.max_steps) <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = OracleBudget()


class BudgetExceeded(Exception):
    def __init__(self, limit: str, value: int):
        super().__init__(f"oracle budget exceeded: {limit} > {value}")
        self.limit = limit
        self.value = value


class _Meter:
    def __init__(self, budget: OracleBudget):
        self.budget = budget
        self.steps = 0
        self.paths = 0

    def step(self) -> None:
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded("max_steps", self.budget.max_steps)

    def path(self) -> None:
        self.paths += 1
        if self.paths > self.budget.max_paths:
            raise BudgetExceeded("max_paths", self.budget.max_paths)


def _prepare(g: Cfg, budget: OracleBudget):
    r = g.reachable()
    if len(r.nodes) > budget.max_nodes:
        raise BudgetExceeded("max_nodes", budget.max_nodes)
    return r, r.successors()


def _walk(succ, start: NodeId, is_target: Callable[[NodeId], bool], used: set,
          meter: _Meter, on_hit: Callable[[list], int]) -> int:
    """Sum ``on_hit(path)`` over arc-simple paths from ``start`` to a target.

    A path stops at the first target it reaches.  ``used`` holds the arcs
    that are already taken and is restored before returning; while
    ``on_hit`` runs it also contains the arcs of the current path.
    """
    path = [start]
    if is_target(start):
        return on_hit(path)
    total = 0
    stack = [[start, 0]]
    while stack:
        frame = stack[-1]
        n, k = frame
        outs = succ[n]
        if k == len(outs):
            stack.pop()
            path.pop()
            if stack:
                used.discard((stack[-1][0], n))
            continue
        frame[1] = k + 1
        m = outs[k]
        arc = (n, m)
        if arc in used:
            continue
        meter.step()
        used.add(arc)
        path.append(m)
        if is_target(m):
            total += on_hit(path)
            path.pop()
            used.discard(arc)
        else:
            stack.append([m, 0])
    return total


def count_paths_to(g: Cfg, target: NodeId, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """tau: arc-simple paths from the entry to ``target``."""
    if target not in g.nodes:
        raise ValueError(f"target {target} is not a node of the graph")
    r, succ = _prepare(g, budget)
    if target not in r.nodes:
        return 0
    meter = _Meter(budget)

    def hit(_path):
        meter.path()
        return 1

    return _walk(succ, r.entry, lambda n: n == target, set(), meter, hit)


def count_acyclic_paths(g: Cfg, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """alpha: arc-simple paths from the entry to any successor-free node."""
    r, succ = _prepare(g, budget)
    meter = _Meter(budget)

    def hit(_path):
        meter.path()
        return 1

    return _walk(succ, r.entry, lambda n: not succ[n], set(), meter, hit)


def count_path_pairs(g: Cfg, s1: NodeId, s2: NodeId,
                     budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """delta: pairs made of a path to ``s1`` followed by an arc-disjoint path to ``s2``.

    Both paths start at the entry; the second one may only use arcs the
    first one left unused.
    """
    for n in (s1, s2):
        if n not in g.nodes:
            raise ValueError(f"node {n} is not a node of the graph")
    r, succ = _prepare(g, budget)
    if s1 not in r.nodes or s2 not in r.nodes:
        return 0
    meter = _Meter(budget)
    used: set = set()

    def second(_path):
        meter.path()
        return 1

    def first(_path):
        return _walk(succ, r.entry, lambda n: n == s2, used, meter, second)

    return _walk(succ, r.entry, lambda n: n == s1, used, meter, first)


def enumerate_acyclic_paths(g: Cfg, budget: OracleBudget = DEFAULT_BUDGET) -> list[list[NodeId]]:
    """Every arc-simple entry-to-exit path, in lexicographic order."""
    r, succ = _prepare(g, budget)
    meter = _Meter(budget)
    found: list[list[NodeId]] = []

    def hit(path):
        meter.path()
        found.append(list(path))
        return 1

    _walk(succ, r.entry, lambda n: not succ[n], set(), meter, hit)
    found.sort()
    return found


def try_count(g: Cfg, budget: OracleBudget = DEFAULT_BUDGET) -> Optional[int]:
    """``count_acyclic_paths`` or None when the budget runs out."""
    try:
        return count_acyclic_paths(g, budget)
    except BudgetExceeded:
        return None
