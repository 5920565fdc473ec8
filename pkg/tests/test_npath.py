import pytest
from hypothesis import given

from pathmetric import ast as A
from pathmetric.npath import NpathConfig, np_expr, np_stmt, npath_body
from pathmetric.parser import SourceFile, parse_body, parse_expression, parse_translation_unit

from programs import EXAMPLE_1, EXAMPLE_2, EXAMPLE_3, EXAMPLE_5, do_while_zero, example_4
from strategies import bodies, exprs

CLAMP = NpathConfig(clamp_expr_statements=True)


def only_function(text):
    (fb,), errors = parse_translation_unit(SourceFile("t.c", text))
    assert errors == []
    return fb


@pytest.mark.parametrize("text, value", [
    ("a && b && c", 2), ("d ? 0 : 1", 2), ("x", 0), ("!(a || b)", 1),
    ("g(a && b, c || d)", 2), ("a ?: b || c", 1), ("(a, b && c)", 1),
])
def test_expression_terms(text, value):
    assert np_expr(parse_expression(text)) == value


def test_constant_subexpressions_count_as_constants():
    assert np_expr(parse_expression("(1 && 2) + x")) == 0


@pytest.mark.parametrize("source, value", [
    (EXAMPLE_1, 6),
    (example_4("break"), 5),
    (example_4("return"), 5),
    (example_4("continue"), 5),
    (EXAMPLE_5, 2),
    (EXAMPLE_3, 4),
    # guard 3, body 1, plus 1 for the loop
    (EXAMPLE_2, 5),
])
def test_function_values(source, value):
    assert npath_body(only_function(source)) == value


def test_sequential_do_while_loops_multiply():
    assert npath_body(only_function(do_while_zero(26))) == 67108864 == 2 ** 26


def test_switch_without_default_counts_the_implicit_one():
    assert np_stmt(parse_body("switch (a) { case 1: ; case 2: ; }").body) == 3
    assert np_stmt(parse_body("switch (a) { case 1: ; default: ; }").body) == 2


def test_statements_before_the_first_case_are_ignored():
    assert np_stmt(parse_body("switch (a) { if (b) ; case 1: ; }").body) == 2


def test_stacked_default_is_the_default_group():
    assert np_stmt(parse_body("switch (a) { case 1: default: ; case 2: ; }").body) == 2


def test_plain_expression_statement_zeroes_the_product():
    b = parse_body("x = 1; if (a) ;")
    assert npath_body(b) == 0
    assert npath_body(b, CLAMP) == 2


@given(bodies, bodies)
def test_sequence_is_a_product(b1, b2):
    s = A.Seq(b1.body, b2.body)
    assert np_stmt(s) == np_stmt(b1.body) * np_stmt(b2.body)
    assert np_stmt(s, CLAMP) == np_stmt(b1.body, CLAMP) * np_stmt(b2.body, CLAMP)


@given(bodies)
def test_clamping_only_raises_the_value(b):
    assert npath_body(b, CLAMP) >= npath_body(b)
    assert npath_body(b, CLAMP) >= 1


@given(exprs)
def test_expression_term_counts_logical_operators(e):
    assert np_expr(e) >= 0
    assert np_expr(A.Not(e)) == np_expr(e)
    assert np_expr(A.Paren(e)) == np_expr(e)
