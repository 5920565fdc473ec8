"""ACPATH: acyclic execution paths counted in one pass over the AST.

Expressions get two families of counters.  ``ExprPaths`` counts single
traversals ending in true, false, or anywhere; ``ExprPairPaths`` counts
pairs of arc-disjoint traversals, which a loop guard needs because it is
evaluated once on entry and once more after the body.

Statements thread an :class:`ApcResult` through the tree.  The result is
exact for controlled bodies (see :func:`is_controlled`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping

from . import ast as A
from .cfg import TriBool, mark_constants, tv


@dataclass(frozen=True)
class ExprPaths:
    tp: int
    fp: int
    pp: int


@dataclass(frozen=True)
class ExprPairPaths:
    tt: int
    tf: int
    ff: int
    pp2: int


GotoCounts = Mapping[str, int]


@dataclass(frozen=True)
class ApcResult:
    ft: int
    bp: int
    cp: int
    rp: int
    gt: dict = field(default_factory=dict)

    def scaled(self, k: int) -> "ApcResult":
        return ApcResult(k * self.ft, k * self.bp, k * self.cp, k * self.rp,
                         {x: k * v for x, v in self.gt.items()})


# --------------------------------------------------------------------------
# Expressions


def _const_paths(e: A.Expr, i: int) -> ExprPaths:
    v = tv(e, i)
    if v is TriBool.TRUE:
        return ExprPaths(1, 0, 1)
    if v is TriBool.FALSE:
        return ExprPaths(0, 1, 1)
    return ExprPaths(1, 1, 1)


def _paths(e: A.Expr, i: int) -> ExprPaths:
    if isinstance(e, A.Var):
        return ExprPaths(1, 1, 1)
    if isinstance(e, (A.IntLit, A.Ice)):
        return _const_paths(e, i)
    if isinstance(e, A.Not):
        p = _paths(e.e, i)
        return ExprPaths(p.fp, p.tp, p.pp)
    if isinstance(e, A.TRANSPARENT):
        return _paths(e.e, i)
    if isinstance(e, A.OtherUnary):
        p = _paths(e.e, i).pp
        return ExprPaths(p, p, p)
    if isinstance(e, A.And):
        a, b = _paths(e.e1, i), _paths(e.e2, i)
        return ExprPaths(a.tp * b.tp, a.fp + a.tp * b.fp, a.fp + a.tp * b.pp)
    if isinstance(e, (A.Or, A.BinCond)):
        a, b = _paths(e.e1, i), _paths(e.e2, i)
        return ExprPaths(a.tp + a.fp * b.tp, a.fp * b.fp, a.tp + a.fp * b.pp)
    if isinstance(e, A.Comma):
        a, b = _paths(e.e1, i), _paths(e.e2, i)
        return ExprPaths(a.pp * b.tp, a.pp * b.fp, a.pp * b.pp)
    if isinstance(e, A.OtherBinary):
        p = _paths(e.e1, i).pp * _paths(e.e2, i).pp
        return ExprPaths(p, p, p)
    if isinstance(e, A.Call):
        p = prod(_paths(a, i).pp for a in e.args)
        return ExprPaths(p, p, p)
    if isinstance(e, A.Cond):
        a, b, c = _paths(e.e1, i), _paths(e.e2, i), _paths(e.e3, i)
        return ExprPaths(a.tp * b.tp + a.fp * c.tp,
                         a.tp * b.fp + a.fp * c.fp,
                         a.tp * b.pp + a.fp * c.pp)
    raise TypeError(f"not an expression: {e!r}")


def _pairs(e: A.Expr, i: int) -> ExprPairPaths:
    if isinstance(e, A.Var):
        return ExprPairPaths(0, 1, 0, 0)
    if isinstance(e, (A.IntLit, A.Ice)):
        v = tv(e, i)
        if v is TriBool.TRUE:
            return ExprPairPaths(1, 0, 0, 1)
        if v is TriBool.FALSE:
            return ExprPairPaths(0, 0, 1, 1)
        return ExprPairPaths(0, 1, 0, 0)
    if isinstance(e, A.Not):
        q = _pairs(e.e, i)
        return ExprPairPaths(q.ff, q.tf, q.tt, q.pp2)
    if isinstance(e, A.TRANSPARENT):
        return _pairs(e.e, i)
    if isinstance(e, A.OtherUnary):
        return ExprPairPaths(0, _pairs(e.e, i).pp2, 0, 0)
    if isinstance(e, A.OtherBinary):
        return ExprPairPaths(0, _pairs(e.e1, i).pp2 * _pairs(e.e2, i).pp2, 0, 0)
    if isinstance(e, A.Call):
        return ExprPairPaths(0, prod(_pairs(a, i).pp2 for a in e.args), 0, 0)
    if isinstance(e, A.Comma):
        a2, b2 = _pairs(e.e1, i), _pairs(e.e2, i)
        k = a2.pp2
        return ExprPairPaths(k * b2.tt, k * b2.tf, k * b2.ff, k * b2.pp2)
    if isinstance(e, A.And):
        a2, b, b2 = _pairs(e.e1, i), _paths(e.e2, i), _pairs(e.e2, i)
        return ExprPairPaths(
            a2.tt * b2.tt,
            a2.tf * b.tp + a2.tt * b2.tf,
            a2.ff + 2 * a2.tf * b.fp + a2.tt * b2.ff,
            a2.ff + 2 * a2.tf * b.pp + a2.tt * b2.pp2,
        )
    if isinstance(e, (A.Or, A.BinCond)):
        a2, b, b2 = _pairs(e.e1, i), _paths(e.e2, i), _pairs(e.e2, i)
        return ExprPairPaths(
            a2.tt + 2 * a2.tf * b.tp + a2.ff * b2.tt,
            a2.tf * b.fp + a2.ff * b2.tf,
            a2.ff * b2.ff,
            a2.tt + 2 * a2.tf * b.pp + a2.ff * b2.pp2,
        )
    if isinstance(e, A.Cond):
        a2 = _pairs(e.e1, i)
        b, b2 = _paths(e.e2, i), _pairs(e.e2, i)
        c, c2 = _paths(e.e3, i), _pairs(e.e3, i)
        return ExprPairPaths(
            a2.tt * b2.tt + 2 * a2.tf * b.tp * c.tp + a2.ff * c2.tt,
            a2.tt * b2.tf + a2.ff * c2.tf + a2.tf * (b.tp * c.fp + b.fp * c.tp),
            a2.tt * b2.ff + 2 * a2.tf * b.fp * c.fp + a2.ff * c2.ff,
            a2.tt * b2.pp2 + 2 * a2.tf * b.pp * c.pp + a2.ff * c2.pp2,
        )
    raise TypeError(f"not an expression: {e!r}")


def expr_paths(e: A.Expr, i: int) -> ExprPaths:
    """Single-traversal counts ``(tp, fp, pp)`` of ``e`` at level ``i``."""
    return _paths(mark_constants(e), i)


def expr_pair_paths(e: A.Expr, i: int) -> ExprPairPaths:
    """Arc-disjoint double-traversal counts ``(tt, tf, ff, pp2)``."""
    return _pairs(mark_constants(e), i)


# --------------------------------------------------------------------------
# Statements


def apc_label(label: A.Label, ft: int, st: int, gt: GotoCounts) -> int:
    if isinstance(label, A.Id):
        return ft + gt[label.name]
    return ft + st


def has_default(s: A.Stmt) -> bool:
    """True when ``s`` holds a default label that belongs to its enclosing switch."""
    stack = [s]
    while stack:
        n = stack.pop()
        if isinstance(n, A.Switch):
            continue
        if isinstance(n, A.Labeled) and isinstance(n.label, A.Default):
            return True
        stack.extend(A.substatements(n))
    return False


class _Apc:
    def __init__(self, i: int, while_return_scaling: bool):
        self.i = i
        self.scale_returns = while_return_scaling

    def paths(self, e):
        return _paths(e, self.i)

    def loop(self, guard: A.Expr, body: A.Stmt, ft, st, gt) -> ApcResult:
        r = self.stmt(body, ft, st, gt)
        p = self.paths(guard)
        tf = _pairs(guard, self.i).tf
        ft_out = p.fp * ft + r.bp * p.tp + (r.ft + r.cp) * tf
        if not self.scale_returns:
            return ApcResult(ft_out, 0, 0, r.rp, r.gt)
        gt_out = {x: gt[x] + p.tp * (r.gt[x] - gt[x]) for x in gt}
        return ApcResult(ft_out, 0, 0, p.tp * r.rp, gt_out)

    def stmt(self, s: A.Stmt, ft: int, st: int, gt: dict) -> ApcResult:
        if isinstance(s, A.ExprStmt):
            return ApcResult(self.paths(s.e).pp * ft, 0, 0, 0, gt)
        if isinstance(s, A.Seq):
            r1 = self.stmt(s.s1, ft, st, gt)
            r2 = self.stmt(s.s2, r1.ft, st, r1.gt)
            return ApcResult(r2.ft, r1.bp + r2.bp, r1.cp + r2.cp, r1.rp + r2.rp, r2.gt)
        if isinstance(s, A.Return):
            return ApcResult(0, 0, 0, ft, gt)
        if isinstance(s, A.ReturnExpr):
            return ApcResult(0, 0, 0, self.paths(s.e).pp * ft, gt)
        if isinstance(s, A.IfElse):
            p = self.paths(s.e)
            r1 = self.stmt(s.s1, p.tp * ft, st, gt)
            r2 = self.stmt(s.s2, p.fp * ft, st, r1.gt)
            return ApcResult(r1.ft + r2.ft, r1.bp + r2.bp, r1.cp + r2.cp,
                             r1.rp + r2.rp, r2.gt)
        if isinstance(s, A.If):
            p = self.paths(s.e)
            r1 = self.stmt(s.s1, p.tp * ft, st, gt)
            return ApcResult(r1.ft + p.fp * ft, r1.bp, r1.cp, r1.rp, r1.gt)
        if isinstance(s, A.Switch):
            dispatch = self.paths(s.e).pp * ft
            r = self.stmt(s.s, 0, dispatch, gt)
            out = r.ft + r.bp + (0 if has_default(s.s) else dispatch)
            return ApcResult(out, 0, r.cp, r.rp, r.gt)
        if isinstance(s, A.While):
            return self.loop(s.e, s.s, ft, st, gt)
        if isinstance(s, A.DoWhile):
            r = self.stmt(s.s, ft, st, gt)
            return ApcResult(self.paths(s.e).fp * r.ft + r.bp, 0, 0, r.rp, r.gt)
        if isinstance(s, A.For):
            pre = self.paths(s.e1).pp * ft
            body = A.Seq(s.s, A.ExprStmt(s.e3))
            return self.loop(s.e2, body, pre, st, gt)
        if isinstance(s, A.Break):
            return ApcResult(0, ft, 0, 0, gt)
        if isinstance(s, A.Continue):
            return ApcResult(0, 0, ft, 0, gt)
        if isinstance(s, A.Goto):
            return ApcResult(0, 0, 0, 0, {**gt, s.label: gt[s.label] + ft})
        if isinstance(s, A.Labeled):
            return self.stmt(s.s, apc_label(s.label, ft, st, gt), st, gt)
        if isinstance(s, A.Compound):
            return self.stmt(s.s, ft, st, gt)
        if isinstance(s, (A.Other, A.Empty)):
            return ApcResult(ft, 0, 0, 0, gt)
        raise TypeError(f"not a statement: {s!r}")


def apc_stmt(s: A.Stmt, ft: int, st: int, gt: GotoCounts, i: int,
             while_return_scaling: bool = False) -> ApcResult:
    """Thread ``(ft, st, gt)`` through ``s`` at optimisation level ``i``.

    With ``while_return_scaling`` the returns and gotos leaving a while or
    for body are multiplied by the guard's true-path count, as if the body
    were entered once per true path of the guard.
    """
    s = A.map_expressions(s, mark_constants)
    return _Apc(i, while_return_scaling).stmt(s, ft, st, dict(gt))


def acpath_body(b: A.FunctionBody, i: int, while_return_scaling: bool = False) -> int:
    """ACPATH of a function body: paths that fall off the end plus paths that return."""
    gt = {x: 0 for x in b.labels}
    r = apc_stmt(b.body, 1, 0, gt, i, while_return_scaling)
    return r.ft + r.rp


# --------------------------------------------------------------------------
# Controlled bodies


@dataclass(frozen=True)
class Violation:
    kind: str
    line: int
    col: int
    detail: str = ""


@dataclass(frozen=True)
class ControlledReport:
    controlled: bool
    violations: tuple[Violation, ...] = ()


def _escapes(loop: A.Stmt, labels: dict) -> bool:
    """Whether control can leave ``loop`` other than through its guard."""
    hi = A.last_order(loop)

    def go(s: A.Stmt, nested_breakable: bool) -> bool:
        if isinstance(s, (A.Return, A.ReturnExpr)):
            return True
        if isinstance(s, A.Break) and not nested_breakable:
            return True
        if isinstance(s, A.Goto):
            target = labels[s.label].order
            if target > hi:
                return True
        inner = nested_breakable or isinstance(s, A.LOOPS + (A.Switch,))
        return any(go(k, inner) for k in A.substatements(s))

    return any(go(k, False) for k in A.substatements(loop))


def _switch_labels(loop: A.Stmt) -> list[A.Labeled]:
    """Case and default labels in ``loop`` that belong to a switch around it."""
    found = []
    stack = list(A.substatements(loop))
    while stack:
        n = stack.pop()
        if isinstance(n, A.Switch):
            continue
        if isinstance(n, A.Labeled) and isinstance(n.label, (A.Case, A.Default)):
            found.append(n)
        stack.extend(A.substatements(n))
    return found


def is_controlled(b: A.FunctionBody) -> ControlledReport:
    """Check that ``b`` has no backjumps and no jump into a loop it can escape.

    A goto must target a label that comes later in program order.  A loop
    that can be left by ``break``, ``return`` or a forward goto must not be
    entered from outside except through its head: no goto from before the
    loop to a label inside it, and no case or default label inside it that
    belongs to a switch outside it.
    """
    labels = {s.label.name: s for s in A.walk(b.body)
              if isinstance(s, A.Labeled) and isinstance(s.label, A.Id)}
    gotos = [s for s in A.walk(b.body) if isinstance(s, A.Goto)]
    out: list[Violation] = []
    for g in gotos:
        if labels[g.label].order <= g.order:
            out.append(Violation("Backjump", g.line, g.col, g.label))
    for loop in A.walk(b.body):
        if not isinstance(loop, A.LOOPS) or not _escapes(loop, labels):
            continue
        lo, hi = loop.order, A.last_order(loop)
        for g in gotos:
            t = labels[g.label].order
            if g.order < lo and lo < t <= hi:
                out.append(Violation("GotoIntoEscapingLoop", g.line, g.col, g.label))
        for lab in _switch_labels(loop):
            out.append(Violation("SwitchIntoEscapingLoop", lab.line, lab.col))
    return ControlledReport(not out, tuple(out))
