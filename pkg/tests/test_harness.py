import random

import pytest
from hypothesis import given, settings

from pathmetric import ast as A
from pathmetric.acpath import acpath_body, is_controlled
from pathmetric.cfg import build_body_cfg
from pathmetric.harness import (Digraph, GenConfig, NoReachableExit, differential_check,
                                embed_graph, gen_controlled_body, random_digraph, random_expr,
                                shrink)
from pathmetric.oracle import OracleBudget, count_acyclic_paths
from pathmetric.parser import SourceFile, parse_body, parse_translation_unit

from programs import EXAMPLE_5, GOTO_INTO_LOOP, SWITCH_INTO_LOOP
from strategies import digraphs, seeds

DIAMOND = Digraph(4, frozenset({(0, 1), (0, 2), (1, 3), (2, 3)}), 0)


def only_function(text):
    (fb,), errors = parse_translation_unit(SourceFile("t.c", text))
    assert errors == []
    return fb


def alpha(b, i=0):
    return count_acyclic_paths(build_body_cfg(b, i))


def test_single_node_graph():
    g = Digraph(1, frozenset(), 0)
    b = embed_graph(g)
    assert b.body == A.Labeled(A.Id("n0"), A.Return())
    assert alpha(b) == count_acyclic_paths(g.to_cfg()) == 1


def test_diamond():
    assert count_acyclic_paths(DIAMOND.to_cfg()) == 2
    for i in (0, 1, 2):
        assert alpha(embed_graph(DIAMOND, stacked_default=False), i) == 2


def test_embedding_is_a_valid_controlled_body():
    b = embed_graph(DIAMOND)
    assert A.validate_body(b) == []
    assert is_controlled(b).controlled


def test_graph_without_reachable_exit_is_rejected():
    with pytest.raises(NoReachableExit):
        embed_graph(Digraph(2, frozenset({(0, 1), (1, 0)}), 0))


def test_random_digraph_respects_limits():
    rng = random.Random(3)
    for _ in range(200):
        g = random_digraph(rng)
        assert 1 <= g.n <= 8 and len(g.arcs) <= 16
        assert all(0 <= a < g.n and 0 <= b < g.n for a, b in g.arcs)


@pytest.mark.parametrize("level", [0, 1, 2])
def test_seed_42_with_plain_default_labels(level):
    g = random_digraph(random.Random(42), max_nodes=6)
    b = embed_graph(g, stacked_default=False)
    assert alpha(b, level) == count_acyclic_paths(g.to_cfg())


@given(digraphs())
def test_acyclic_digraphs_embed_exactly(d):
    dag = Digraph(d.n, frozenset((a, b) for a, b in d.arcs if a < b), 0)
    expected = count_acyclic_paths(dag.to_cfg())
    b = embed_graph(dag, stacked_default=False)
    for i in (0, 1, 2):
        assert alpha(b, i) == expected
    assert acpath_body(b, 0) == expected


def test_generator_seed_one_is_controlled():
    assert is_controlled(gen_controlled_body(GenConfig(seed=1))).controlled


def test_generator_gives_controlled_bodies():
    for seed in range(1000):
        b = gen_controlled_body(GenConfig(seed=seed))
        assert A.validate_body(b) == []
        assert is_controlled(b).controlled
        assert len(build_body_cfg(b, 0).reachable().nodes) <= 25


@given(seeds)
def test_generator_without_gotos(seed):
    b = gen_controlled_body(GenConfig(seed=seed, gotos=False))
    assert not any(isinstance(s, A.Goto) for s in A.walk(b.body))


@given(seeds)
def test_generator_is_deterministic(seed):
    assert gen_controlled_body(GenConfig(seed=seed)) == gen_controlled_body(GenConfig(seed=seed))


def test_random_expr_depth():
    def depth(e):
        kids = [v for v in vars(e).values() if not isinstance(v, (str, int, tuple))]
        kids += [a for v in vars(e).values() if isinstance(v, tuple) for a in v]
        return 1 + max((depth(k) for k in kids), default=0)

    rng = random.Random(0)
    assert all(depth(random_expr(rng, depth=5)) <= 6 for _ in range(300))


def test_example_five_matches():
    v = differential_check(only_function(EXAMPLE_5), 0)
    assert (v.acpath, v.alpha, v.controlled, v.match) == (1, 1, True, True)


def test_non_controlled_counterexamples():
    f = differential_check(only_function(GOTO_INTO_LOOP), 2)
    g = differential_check(only_function(SWITCH_INTO_LOOP), 2)
    assert (f.acpath, f.alpha, f.controlled, f.match) == (1, 2, False, False)
    assert (g.acpath, g.alpha, g.controlled, g.match) == (2, 3, False, False)
    assert "not controlled" in f.note and "not controlled" in g.note


def test_budget_gives_no_alpha():
    v = differential_check(parse_body("if (a) ; if (b) ;"), 0, OracleBudget(max_nodes=3))
    assert v.alpha is None and v.match is None and v.acpath == 4


def test_quarantine_is_labelled():
    v = differential_check(parse_body("while (a || z) { return; }"), 0)
    assert v.quarantined and not v.match and "known discrepancy" in v.note
    fixed = differential_check(parse_body("while (a || z) { return; }"), 0,
                               while_return_scaling=True)
    assert fixed.match and not fixed.quarantined


def test_shrink_keeps_the_property_and_reduces():
    b = parse_body("a; if (b) c; while (d) { if (e) break; f; } g;")

    def has_break(fb):
        return any(isinstance(s, A.Break) for s in A.walk(fb.body))

    small = shrink(b, has_break)
    assert has_break(small) and A.validate_body(small) == []
    assert len(list(A.walk(small.body))) < len(list(A.walk(b.body)))
    assert not any(isinstance(s, A.If) for s in A.walk(small.body))


@settings(max_examples=60)
@given(seeds)
def test_generated_bodies_agree_at_level_zero_without_loops(seed):
    b = gen_controlled_body(GenConfig(seed=seed, loops=False))
    v = differential_check(b, 0)
    assert v.match is not False
