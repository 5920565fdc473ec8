"""NPATH, computed syntactically over the AST."""

from __future__ import annotations

from dataclasses import dataclass

from . import ast as A
from .cfg import mark_constants


@dataclass(frozen=True)
class NpathConfig:
    # Literal NPATH gives an expression statement without logical operators
    # the value 0, which zeroes every product it takes part in.
    clamp_expr_statements: bool = False


def np_expr(e: A.Expr) -> int:
    """Expression term of NPATH; constant expressions count as constants."""
    return _np(mark_constants(e))


def _np(e: A.Expr) -> int:
    if isinstance(e, (A.Var, A.IntLit, A.Ice)):
        return 0
    if isinstance(e, (A.Not, A.OtherUnary) + A.TRANSPARENT):
        return _np(e.e)
    if isinstance(e, (A.And, A.Or)):
        return _np(e.e1) + _np(e.e2) + 1
    if isinstance(e, (A.Comma, A.BinCond, A.OtherBinary)):
        return _np(e.e1) + _np(e.e2)
    if isinstance(e, A.Cond):
        return _np(e.e1) + _np(e.e2) + _np(e.e3) + 2
    if isinstance(e, A.Call):
        return sum(_np(a) for a in e.args)
    raise TypeError(f"not an expression: {e!r}")


def _switch_groups(body: A.Stmt) -> tuple[list[list[A.Stmt]], list[A.Stmt] | None]:
    """Split a switch body into case groups and the default group.

    A group starts at a case or default label and runs up to the next one.
    Statements before the first label cannot execute from the dispatch and
    are left out.
    """
    if isinstance(body, A.Compound):
        body = body.s
    groups: list[tuple[bool, list[A.Stmt]]] = []
    for s in A.flatten(body):
        if isinstance(s, A.Labeled) and isinstance(s.label, (A.Case, A.Default)):
            # peel stacked labels such as `case 1: default: S`
            is_default = False
            inner = s
            while isinstance(inner, A.Labeled) and isinstance(inner.label, (A.Case, A.Default)):
                is_default = is_default or isinstance(inner.label, A.Default)
                inner = inner.s
            groups.append((is_default, [inner]))
        elif groups:
            groups[-1][1].append(s)
    cases = [g for d, g in groups if not d]
    defaults = [g for d, g in groups if d]
    return cases, (defaults[0] if defaults else None)


def np_stmt(s: A.Stmt, cfg: NpathConfig = NpathConfig()) -> int:
    if isinstance(s, A.ExprStmt):
        v = np_expr(s.e)
        return max(1, v) if cfg.clamp_expr_statements else v
    if isinstance(s, A.Seq):
        return np_stmt(s.s1, cfg) * np_stmt(s.s2, cfg)
    if isinstance(s, A.Return):
        return 1
    if isinstance(s, A.ReturnExpr):
        return max(1, np_expr(s.e))
    if isinstance(s, A.IfElse):
        return np_expr(s.e) + np_stmt(s.s1, cfg) + np_stmt(s.s2, cfg)
    if isinstance(s, A.If):
        return np_expr(s.e) + np_stmt(s.s1, cfg) + 1
    if isinstance(s, (A.While, A.DoWhile)):
        return np_expr(s.e) + np_stmt(s.s, cfg) + 1
    if isinstance(s, A.For):
        return (np_expr(s.e1) + np_expr(s.e2) + np_expr(s.e3)
                + np_stmt(s.s, cfg) + 1)
    if isinstance(s, A.Switch):
        cases, default = _switch_groups(s.s)
        total = np_expr(s.e)
        for g in cases:
            total += np_stmt(A.seq(*g), cfg)
        total += np_stmt(A.seq(*default), cfg) if default is not None else 1
        return total
    if isinstance(s, (A.Break, A.Continue, A.Goto, A.Other, A.Empty)):
        return 1
    if isinstance(s, (A.Labeled, A.Compound)):
        return np_stmt(s.s, cfg)
    raise TypeError(f"not a statement: {s!r}")


def npath_body(b: A.FunctionBody, cfg: NpathConfig = NpathConfig()) -> int:
    return np_stmt(b.body, cfg)
