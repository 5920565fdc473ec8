from functools import lru_cache

import pytest
from hypothesis import given

from pathmetric.cfg import Cfg, build_body_cfg
from pathmetric.oracle import (BudgetExceeded, OracleBudget, count_acyclic_paths,
                               count_path_pairs, count_paths_to, enumerate_acyclic_paths,
                               try_count)
from pathmetric.parser import parse_body

from programs import FIGURES
from strategies import digraphs


def graph(arcs, entry, extra=()):
    nodes = {n for a in arcs for n in a} | {entry} | set(extra)
    return Cfg(frozenset(nodes), frozenset(arcs), entry)


SINGLE = graph((), 0)
VARIABLE = graph({(2, 0), (2, 1)}, 2)
DIAMOND = graph({(3, 1), (3, 2), (1, 0), (2, 0)}, 3)
TRUE_CONSTANT = graph((), 0)


def test_paths_to_target():
    assert count_paths_to(SINGLE, 0) == 1
    assert count_paths_to(VARIABLE, 0) == 1
    assert count_paths_to(DIAMOND, 0) == 2


def test_unknown_target_is_rejected():
    with pytest.raises(ValueError):
        count_paths_to(DIAMOND, 9)


def test_unreachable_target_has_no_paths():
    g = graph({(1, 0)}, 1, extra={5})
    assert count_paths_to(g, 5) == 0


def test_path_pairs():
    assert count_path_pairs(VARIABLE, 0, 1) == 1
    assert count_path_pairs(VARIABLE, 1, 0) == 1
    assert count_path_pairs(VARIABLE, 0, 0) == 0
    assert count_path_pairs(TRUE_CONSTANT, 0, 0) == 1


def test_enumeration():
    assert enumerate_acyclic_paths(SINGLE) == [[0]]
    assert enumerate_acyclic_paths(DIAMOND) == [[3, 1, 0], [3, 2, 0]]


def test_nodes_may_repeat_but_arcs_may_not():
    # 2 -> 1 -> 2 is a cycle through 2; it can be taken once
    g = graph({(2, 1), (1, 2), (2, 0)}, 2)
    assert enumerate_acyclic_paths(g) == [[2, 0], [2, 1, 2, 0]]


@pytest.mark.parametrize("name", ["cfg4", "cfg18", "cfg27", "cfg24"])
def test_reference_figures(name):
    body, alpha = FIGURES[name]
    g = build_body_cfg(parse_body(body), 0)
    assert count_acyclic_paths(g) == alpha
    assert len(enumerate_acyclic_paths(g)) == alpha


def test_node_budget():
    with pytest.raises(BudgetExceeded) as info:
        count_acyclic_paths(DIAMOND, OracleBudget(max_nodes=3))
    assert info.value.limit == "max_nodes"
    assert try_count(DIAMOND, OracleBudget(max_nodes=3)) is None


def test_path_budget():
    chain = graph({(2 * k + 2, 2 * k + 1) for k in range(12)}
                  | {(2 * k + 2, 2 * k) for k in range(12)}
                  | {(2 * k + 1, 2 * k) for k in range(12)}, 24)
    assert count_acyclic_paths(chain) == 2 ** 12
    with pytest.raises(BudgetExceeded):
        count_acyclic_paths(chain, OracleBudget(max_paths=1000))


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        OracleBudget(max_nodes=0)


def dag_paths(g):
    succ = g.successors()

    @lru_cache(maxsize=None)
    def count(n):
        return 1 if not succ[n] else sum(count(m) for m in succ[n])

    return count(g.entry)


@given(digraphs())
def test_enumeration_agrees_with_count(d):
    g = d.to_cfg()
    paths = enumerate_acyclic_paths(g)
    assert len(paths) == count_acyclic_paths(g)
    for p in paths:
        steps = list(zip(p, p[1:]))
        assert len(set(steps)) == len(steps)
        assert all(s in g.arcs for s in steps)
        assert p[0] == g.entry and not g.successors()[p[-1]]


@given(digraphs())
def test_on_acyclic_graphs_paths_are_plain_paths(d):
    dag = type(d)(d.n, frozenset((a, b) for a, b in d.arcs if a < b), d.entry)
    g = dag.to_cfg()
    assert count_acyclic_paths(g) == dag_paths(g.reachable())


@given(digraphs())
def test_pairs_starting_with_the_empty_path(d):
    # a first leg that ends at the entry uses no arcs, so the pair count is
    # just the number of paths to the second waypoint
    g = d.to_cfg()
    for n in g.reachable().nodes:
        assert count_path_pairs(g, g.entry, n) == count_paths_to(g, n)
