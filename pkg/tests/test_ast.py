from hypothesis import given

from pathmetric import ast as A
from pathmetric.parser import parse_body, parse_translation_unit, SourceFile

from programs import EXAMPLE_1, GOTO_INTO_LOOP
from strategies import bodies


def kinds(src):
    return [e.kind for e in A.validate_body(parse_body(src))]


def test_undefined_label():
    errors = A.validate_body(parse_body("goto l1;"))
    assert [(e.kind, "l1" in e.message) for e in errors] == [("UndefinedLabel", True)]


def test_stray_break_and_continue():
    assert kinds("break;") == ["StrayBreak"]
    assert kinds("continue;") == ["StrayContinue"]
    assert kinds("switch (x) { case 1: continue; }") == ["StrayContinue"]
    assert kinds("switch (x) { case 1: break; }") == []
    assert kinds("while (x) { if (y) continue; else break; }") == []


def test_duplicate_label_and_defaults():
    assert kinds("l: ; l: ;") == ["DuplicateLabel"]
    assert kinds("switch (x) { default: ; default: ; }") == ["MultipleDefaults"]
    # a nested switch has its own default
    assert kinds("switch (x) { default: switch (y) { default: ; } }") == []


def test_case_outside_switch():
    assert kinds("case 1: ;") == ["StrayCase"]


def test_errors_carry_positions():
    (e,) = A.validate_body(parse_body("x;\n  break;"))
    assert (e.line, e.col) == (2, 3)


def test_example_one_is_valid():
    (fb,), errors = parse_translation_unit(SourceFile("e1.c", EXAMPLE_1))
    assert errors == [] and A.validate_body(fb) == []


def test_collect_labels():
    assert A.collect_labels(parse_body("l1: x; l2: y;")) == {"l1", "l2"}
    assert A.collect_labels(parse_body("switch (x) { case 1: default: ; }")) == set()
    (fb,), _ = parse_translation_unit(SourceFile("f.c", GOTO_INTO_LOOP))
    assert A.collect_labels(fb) == {"l1"} == fb.labels


def test_seq_and_flatten():
    a, b, c = A.ExprStmt(A.Var("a")), A.Break(), A.Empty()
    s = A.seq(a, b, c)
    assert s == A.Seq(A.Seq(a, b), c)
    assert A.flatten(s) == [a, b, c]
    assert A.seq() == A.Empty()


def test_order_does_not_affect_equality():
    assert A.Break(order=3, line=7) == A.Break()


@given(bodies)
def test_order_is_a_preorder_bijection(fb):
    orders = [s.order for s in A.walk(fb.body)]
    assert orders == list(range(len(orders)))


@given(bodies)
def test_validate_is_idempotent(fb):
    assert A.validate_body(fb) == A.validate_body(fb) == []


@given(bodies)
def test_last_order_is_the_largest_inside(fb):
    for s in A.walk(fb.body):
        assert A.last_order(s) == max(k.order for k in A.walk(s))
