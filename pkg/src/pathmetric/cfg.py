"""Reference control-flow graphs for expressions, statements and bodies.

Construction runs from the end of the program backwards: a fragment is
built for a successor first and its entry node becomes the target of the
fragment that precedes it.  Fresh node ids therefore count upward while the
text is read downward, so a larger id always belongs to a textually earlier
construct.  Node 0 is the normal-completion exit of a function body.

Three optimisation levels decide which guards fold:

* level 0 folds nothing;
* level 1 folds guards that are integer literals;
* level 2 folds every integer constant expression.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from . import ast as A

NodeId = int
CASE_KEY = "case"        # multimap keys; C keywords cannot clash with labels
DEFAULT_KEY = "default"
_SHIFT_LIMIT = 4096


class TriBool(enum.Enum):
    FALSE = 0
    TRUE = 1
    UNKNOWN = "?"


class MarkerKind(enum.Enum):
    SWITCH_ENTER = "SwitchEnter"
    SWITCH_EXIT = "SwitchExit"
    WHILE_ENTER = "WhileEnter"
    WHILE_EXIT = "WhileExit"
    DO_WHILE_ENTER = "DoWhileEnter"
    DO_WHILE_EXIT = "DoWhileExit"


# --------------------------------------------------------------------------
# Integer constant expressions


class _NotConstant(Exception):
    pass


def _check_constant(e: A.Expr) -> None:
    if isinstance(e, A.IntLit):
        return
    if isinstance(e, (A.Var, A.Call)):
        raise _NotConstant
    if isinstance(e, A.Cast) and e.type_name != "int":
        raise _NotConstant
    if isinstance(e, A.OtherUnary) and e.op != "~":
        raise _NotConstant
    if isinstance(e, A.OtherBinary) and e.op not in _ARITH:
        raise _NotConstant
    for sub in A.subexpressions(e):
        _check_constant(sub)


def _c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _shift(a: int, b: int, left: bool) -> int:
    if b < 0 or b > _SHIFT_LIMIT:
        raise _NotConstant
    return a << b if left else a >> b


def _div(a: int, b: int) -> int:
    if b == 0:
        raise _NotConstant
    return _c_div(a, b)


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise _NotConstant
    return a - b * _c_div(a, b)


_ARITH = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "%": _mod,
    "<<": lambda a, b: _shift(a, b, True),
    ">>": lambda a, b: _shift(a, b, False),
    "<": lambda a, b: int(a < b),
    ">": lambda a, b: int(a > b),
    "<=": lambda a, b: int(a <= b),
    ">=": lambda a, b: int(a >= b),
    "==": lambda a, b: int(a == b),
    "!=": lambda a, b: int(a != b),
    "&": lambda a, b: a & b,
    "|": lambda a, b: a | b,
    "^": lambda a, b: a ^ b,
}


def _value(e: A.Expr) -> int:
    if isinstance(e, A.IntLit):
        return e.value
    if isinstance(e, A.Ice):
        return _value(e.sub)
    if isinstance(e, (A.Paren, A.UnaryPlus, A.Cast)):
        return _value(e.e)
    if isinstance(e, A.UnaryMinus):
        return -_value(e.e)
    if isinstance(e, A.Not):
        return int(_value(e.e) == 0)
    if isinstance(e, A.OtherUnary):          # only "~" survives the check
        return ~_value(e.e)
    if isinstance(e, A.And):
        return int(_value(e.e1) != 0 and _value(e.e2) != 0)
    if isinstance(e, A.Or):
        return int(_value(e.e1) != 0 or _value(e.e2) != 0)
    if isinstance(e, A.Comma):
        _value(e.e1)
        return _value(e.e2)
    if isinstance(e, A.BinCond):
        v = _value(e.e1)
        return v if v != 0 else _value(e.e2)
    if isinstance(e, A.Cond):
        return _value(e.e2) if _value(e.e1) != 0 else _value(e.e3)
    if isinstance(e, A.OtherBinary):
        return _ARITH[e.op](_value(e.e1), _value(e.e2))
    raise _NotConstant


def eval_ice(e: A.Expr) -> Optional[int]:
    """Value of ``e`` as an integer constant expression, or None.

    Arithmetic is exact; ``/`` and ``%`` truncate toward zero as in C and
    logical operators short-circuit, so ``0 && 1/0`` is the constant 0.
    """
    try:
        _check_constant(e)
        return _value(e)
    except _NotConstant:
        return None


def mark_constants(e: A.Expr) -> A.Expr:
    """Wrap each maximal non-literal constant subexpression in :class:`Ice`.

    ``!`` and the transparent unary forms are looked through rather than
    wrapped, so ``!(1+2)`` becomes ``Not(Paren(Ice(1+2)))``.  The pass is
    idempotent.
    """
    if isinstance(e, (A.IntLit, A.Ice, A.Var)):
        return e
    if isinstance(e, (A.Not,) + A.TRANSPARENT):
        return replace(e, e=mark_constants(e.e))
    if eval_ice(e) is not None:
        return A.Ice(e)
    if isinstance(e, A.Call):
        return replace(e, args=tuple(mark_constants(a) for a in e.args))
    if isinstance(e, A.OtherUnary):
        return replace(e, e=mark_constants(e.e))
    if isinstance(e, A.Cond):
        return replace(e, e1=mark_constants(e.e1), e2=mark_constants(e.e2),
                       e3=mark_constants(e.e3))
    return replace(e, e1=mark_constants(e.e1), e2=mark_constants(e.e2))


def mark_constants_in(s: A.Stmt) -> A.Stmt:
    return A.map_expressions(s, mark_constants)


def tv(e: A.Expr, i: int) -> TriBool:
    """Truth value of ``e`` as known at optimisation level ``i``."""
    if i == 0:
        return TriBool.UNKNOWN
    if i == 1:
        v = e.value if isinstance(e, A.IntLit) else None
    else:
        v = eval_ice(e)
    if v is None:
        return TriBool.UNKNOWN
    return TriBool.TRUE if v != 0 else TriBool.FALSE


# --------------------------------------------------------------------------
# Graphs


@dataclass(frozen=True)
class Origin:
    """What produced a node, with a key that orders nodes textually.

    ``key`` is ``(order, 0)`` for nodes that stand at the start of their
    statement and ``(last order inside the statement, 1)`` for joins and
    other nodes that stand at its end.
    """

    kind: str
    key: tuple
    line: int = 0


@dataclass(frozen=True)
class Cfg:
    nodes: frozenset
    arcs: frozenset
    entry: NodeId
    origin: Mapping[NodeId, Origin] = field(default_factory=dict, compare=False)
    markers: tuple = field(default=(), compare=False)

    def successors(self) -> dict[NodeId, tuple[NodeId, ...]]:
        out: dict[NodeId, list[NodeId]] = {n: [] for n in self.nodes}
        for a, b in self.arcs:
            out[a].append(b)
        return {n: tuple(sorted(v)) for n, v in out.items()}

    def exits(self) -> frozenset:
        sources = {a for a, _ in self.arcs}
        return frozenset(n for n in self.nodes if n not in sources)

    def reachable(self) -> "Cfg":
        """The subgraph reachable from the entry node."""
        succ = self.successors()
        seen = {self.entry}
        stack = [self.entry]
        while stack:
            for m in succ[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return Cfg(frozenset(seen),
                   frozenset(a for a in self.arcs if a[0] in seen),
                   self.entry,
                   {n: o for n, o in self.origin.items() if n in seen},
                   tuple(mk for mk in self.markers if mk[0] in seen))


LabelMultimap = tuple   # of (key, node); key is CASE_KEY, DEFAULT_KEY or an identifier
GotoMap = tuple         # of (identifier, node)


class _Frag:
    __slots__ = ("nodes", "arcs", "entry", "next", "ms", "mg")

    def __init__(self, nodes, arcs, entry, nxt, ms=(), mg=()):
        self.nodes = nodes
        self.arcs = arcs
        self.entry = entry
        self.next = nxt
        self.ms = list(ms)
        self.mg = list(mg)

    def rename(self, old: NodeId, new: NodeId) -> None:
        if old in self.nodes:
            self.nodes.discard(old)
            self.nodes.add(new)
        if any(old in arc for arc in self.arcs):
            self.arcs = {(new if a == old else a, new if b == old else b)
                         for a, b in self.arcs}
        if self.entry == old:
            self.entry = new


def _has_visible_labels(s: A.Stmt) -> bool:
    """Whether building ``s`` yields a non-empty label multimap."""
    if isinstance(s, A.Labeled):
        return True
    if isinstance(s, A.Switch):
        return any(isinstance(x, A.Labeled) and isinstance(x.label, A.Id)
                   for x in A.walk(s.s))
    return any(_has_visible_labels(k) for k in A.substatements(s))


class _Builder:
    def __init__(self, level: int):
        if level not in (0, 1, 2):
            raise ValueError(f"optimisation level must be 0, 1 or 2, not {level!r}")
        self.level = level
        self.origin: dict[NodeId, Origin] = {}
        self.markers: list[tuple[NodeId, MarkerKind]] = []
        self._placeholder = 0

    def placeholder(self) -> NodeId:
        self._placeholder -= 1
        return self._placeholder

    def note(self, n: NodeId, kind: str, key: tuple, line: int = 0) -> None:
        self.origin[n] = Origin(kind, key, line)

    # -- expressions -------------------------------------------------------

    def branch(self, t, f, m, key, line) -> _Frag:
        self.note(m, "branch", key, line)
        return _Frag({m, t, f}, {(m, t), (m, f)}, m, m + 1)

    def expr(self, e: A.Expr, t, f, m, key, line=0) -> _Frag:
        if isinstance(e, A.Var):
            return self.branch(t, f, m, key, line)
        if isinstance(e, (A.IntLit, A.Ice)):
            v = tv(e, self.level)
            if v is TriBool.TRUE:
                return _Frag({t}, set(), t, m)
            if v is TriBool.FALSE:
                return _Frag({f}, set(), f, m)
            return self.branch(t, f, m, key, line)
        if isinstance(e, A.Not):
            return self.expr(e.e, f, t, m, key, line)
        if isinstance(e, A.TRANSPARENT):
            return self.expr(e.e, t, f, m, key, line)
        if isinstance(e, A.OtherUnary):
            inner = self.expr(e.e, m, m, m + 1, key, line)
            self.note(m, "operator", key, line)
            return _Frag(inner.nodes | {m, t, f}, inner.arcs | {(m, t), (m, f)},
                         inner.entry, inner.next)
        if isinstance(e, A.And):
            v = tv(e.e1, self.level)
            if v is TriBool.FALSE:
                return _Frag({f}, set(), f, m)
            if v is TriBool.TRUE:
                return self.expr(e.e2, t, f, m, key, line)
            f2 = self.expr(e.e2, t, f, m, key, line)
            f1 = self.expr(e.e1, f2.entry, f, f2.next, key, line)
            return _Frag(f1.nodes | f2.nodes, f1.arcs | f2.arcs, f1.entry, f1.next)
        if isinstance(e, (A.Or, A.BinCond)):
            v = tv(e.e1, self.level)
            if v is TriBool.TRUE:
                return _Frag({t}, set(), t, m)
            if v is TriBool.FALSE:
                return self.expr(e.e2, t, f, m, key, line)
            f2 = self.expr(e.e2, t, f, m, key, line)
            f1 = self.expr(e.e1, t, f2.entry, f2.next, key, line)
            return _Frag(f1.nodes | f2.nodes, f1.arcs | f2.arcs, f1.entry, f1.next)
        if isinstance(e, A.Comma):
            f2 = self.expr(e.e2, t, f, m, key, line)
            f1 = self.expr(e.e1, f2.entry, f2.entry, f2.next, key, line)
            return _Frag(f1.nodes | f2.nodes, f1.arcs | f2.arcs, f1.entry, f1.next)
        if isinstance(e, A.OtherBinary):
            return self.operands((e.e1, e.e2), t, f, m, key, line)
        if isinstance(e, A.Call):
            if not e.args:
                return self.branch(t, f, m, key, line)
            return self.operands(e.args, t, f, m, key, line)
        if isinstance(e, A.Cond):
            v = tv(e.e1, self.level)
            if v is TriBool.TRUE:
                return self.expr(e.e2, t, f, m, key, line)
            if v is TriBool.FALSE:
                return self.expr(e.e3, t, f, m, key, line)
            f2 = self.expr(e.e2, t, f, m, key, line)
            f3 = self.expr(e.e3, t, f, f2.next, key, line)
            f1 = self.expr(e.e1, f2.entry, f3.entry, f3.next, key, line)
            return _Frag(f1.nodes | f2.nodes | f3.nodes, f1.arcs | f2.arcs | f3.arcs,
                         f1.entry, f1.next)
        raise TypeError(f"not an expression: {e!r}")

    def operands(self, args, t, f, m, key, line) -> _Frag:
        """Evaluate ``args`` left to right, then branch on the operator node ``m``."""
        self.note(m, "operator", key, line)
        nodes, arcs = {m, t, f}, {(m, t), (m, f)}
        target, nxt = m, m + 1
        for a in reversed(args):
            fa = self.expr(a, target, target, nxt, key, line)
            nodes |= fa.nodes
            arcs |= fa.arcs
            target, nxt = fa.entry, fa.next
        return _Frag(nodes, arcs, target, nxt)

    # -- labels and statements ---------------------------------------------

    def label(self, lab: A.Label, t, m, key, line=0) -> _Frag:
        if isinstance(lab, A.Case):
            k, kind = CASE_KEY, "case"
        elif isinstance(lab, A.Default):
            k, kind = DEFAULT_KEY, "default"
        else:
            k, kind = lab.name, "label"
        self.note(m, kind, key, line)
        return _Frag({m, t}, {(m, t)}, m, m + 1, ms=[(k, m)])

    def stmt(self, s: A.Stmt, t, tb, tc, m) -> _Frag:
        start = (s.order, 0)
        end = (A.last_order(s), 1)
        line = s.line
        if isinstance(s, A.ExprStmt):
            return self.expr(s.e, t, t, m, start, line)
        if isinstance(s, A.Seq):
            f2 = self.stmt(s.s2, t, tb, tc, m)
            f1 = self.stmt(s.s1, f2.entry, tb, tc, f2.next)
            return _Frag(f1.nodes | f2.nodes, f1.arcs | f2.arcs, f1.entry, f1.next,
                         f1.ms + f2.ms, f1.mg + f2.mg)
        if isinstance(s, A.Return):
            self.note(m, "return", start, line)
            return _Frag({m}, set(), m, m + 1)
        if isinstance(s, A.ReturnExpr):
            fe = self.expr(s.e, m, m, m + 1, start, line)
            self.note(m, "return", end, line)
            return _Frag(fe.nodes | {m}, fe.arcs, fe.entry, fe.next)
        if isinstance(s, A.IfElse):
            v = tv(s.e, self.level)
            if v is TriBool.TRUE and not _has_visible_labels(s.s2):
                return self.stmt(s.s1, t, tb, tc, m)
            if v is TriBool.FALSE and not _has_visible_labels(s.s1):
                return self.stmt(s.s2, t, tb, tc, m)
            f2 = self.stmt(s.s2, m, tb, tc, m + 1)
            m1 = f2.next
            f1 = self.stmt(s.s1, m1, tb, tc, m1 + 1)
            fe = self.expr(s.e, f1.entry, f2.entry, f1.next, start, line)
            self.note(m, "join", end, line)
            self.note(m1, "join", (A.last_order(s.s1), 1), line)
            return _Frag(fe.nodes | f1.nodes | f2.nodes | {m, m1, t},
                         fe.arcs | f1.arcs | f2.arcs | {(m, t), (m1, t)},
                         fe.entry, fe.next, f1.ms + f2.ms, f1.mg + f2.mg)
        if isinstance(s, A.If):
            v = tv(s.e, self.level)
            if v is TriBool.TRUE:
                return self.stmt(s.s1, t, tb, tc, m)
            if v is TriBool.FALSE and not _has_visible_labels(s.s1):
                return _Frag({t}, set(), t, m)
            f1 = self.stmt(s.s1, m, tb, tc, m + 1)
            fe = self.expr(s.e, f1.entry, t, f1.next, start, line)
            self.note(m, "join", end, line)
            return _Frag(fe.nodes | f1.nodes | {m, t}, fe.arcs | f1.arcs | {(m, t)},
                         fe.entry, fe.next, f1.ms, f1.mg)
        if isinstance(s, A.Switch):
            fs = self.stmt(s.s, m, m, tc, m + 1)
            m1 = fs.next
            fe = self.expr(s.e, m1, m1, m1 + 1, start, line)
            targets = [n for k, n in fs.ms if k in (CASE_KEY, DEFAULT_KEY)]
            arcs = fe.arcs | fs.arcs | {(m, t)} | {(m1, n) for n in targets}
            if not any(k == DEFAULT_KEY for k, _ in fs.ms):
                arcs.add((m1, m))
            self.note(m1, "switch", start, line)
            self.note(m, "switch-exit", end, line)
            self.markers += [(m1, MarkerKind.SWITCH_ENTER), (m, MarkerKind.SWITCH_EXIT)]
            ms = [(k, n) for k, n in fs.ms if k not in (CASE_KEY, DEFAULT_KEY)]
            return _Frag(fe.nodes | fs.nodes | {m, m1, t}, arcs, fe.entry, fe.next,
                         ms, fs.mg)
        if isinstance(s, A.While):
            return self.loop(s.e, lambda tt, tcc, mm: self.stmt(s.s, tt, t, tcc, mm),
                             t, m, start, end, line)
        if isinstance(s, A.For):
            def body(tt, tcc, mm):
                # `S E3;` with E3 falling through to the loop latch
                f3 = self.expr(s.e3, tt, tt, mm, end, line)
                fs = self.stmt(s.s, f3.entry, t, tcc, f3.next)
                return _Frag(fs.nodes | f3.nodes, fs.arcs | f3.arcs, fs.entry,
                             fs.next, fs.ms, fs.mg)
            fw = self.loop(s.e2, body, t, m, start, end, line)
            f1 = self.expr(s.e1, fw.entry, fw.entry, fw.next, start, line)
            return _Frag(f1.nodes | fw.nodes, f1.arcs | fw.arcs, f1.entry, f1.next,
                         fw.ms, fw.mg)
        if isinstance(s, A.DoWhile):
            back = self.placeholder()
            fe = self.expr(s.e, back, t, m, end, line)
            m1 = fe.next
            fs = self.stmt(s.s, m1, t, fe.entry, m1 + 1)
            m2 = fs.next
            fe.rename(back, m2)
            fs.rename(back, m2)
            self.note(m1, "do-latch", end, line)
            self.note(m2, "do", start, line)
            self.markers += [(m2, MarkerKind.DO_WHILE_ENTER), (m1, MarkerKind.DO_WHILE_EXIT)]
            return _Frag(fe.nodes | fs.nodes | {m1, m2},
                         fe.arcs | fs.arcs | {(m1, fe.entry), (m2, fs.entry)},
                         fs.entry, m2 + 1, fs.ms, fs.mg)
        if isinstance(s, A.Break):
            self.note(m, "break", start, line)
            return _Frag({m, tb}, {(m, tb)}, m, m + 1)
        if isinstance(s, A.Continue):
            self.note(m, "continue", start, line)
            return _Frag({m, tc}, {(m, tc)}, m, m + 1)
        if isinstance(s, A.Goto):
            # the jump arc is added once all labels are known
            self.note(m, "goto", start, line)
            return _Frag({m}, set(), m, m + 1, mg=[(s.label, m)])
        if isinstance(s, A.Labeled):
            fs = self.stmt(s.s, t, tb, tc, m)
            fl = self.label(s.label, fs.entry, fs.next, start, line)
            return _Frag(fl.nodes | fs.nodes, fl.arcs | fs.arcs, fl.entry, fl.next,
                         fs.ms + fl.ms, fs.mg)
        if isinstance(s, A.Compound):
            return self.stmt(s.s, t, tb, tc, m)
        if isinstance(s, (A.Other, A.Empty)):
            return _Frag({t}, set(), t, m)
        raise TypeError(f"not a statement: {s!r}")

    def loop(self, guard, build_body, t, m, start, end, line) -> _Frag:
        """``while (guard) body``; ``build_body(t, tc, m)`` builds the body."""
        cont = self.placeholder()
        fs = build_body(m, cont, m + 1)
        m1 = fs.next
        fe = self.expr(guard, m1, t, m1 + 1, start, line)
        fs.rename(cont, fe.entry)
        self.note(m, "while-latch", end, line)
        self.note(m1, "while", start, line)
        self.markers += [(m1, MarkerKind.WHILE_ENTER), (m, MarkerKind.WHILE_EXIT)]
        return _Frag(fe.nodes | fs.nodes | {m, m1},
                     fe.arcs | fs.arcs | {(m, fe.entry), (m1, fs.entry)},
                     fe.entry, fe.next, fs.ms, fs.mg)

    def graph(self, fr: _Frag) -> Cfg:
        nodes = frozenset(fr.nodes)
        return Cfg(nodes, frozenset(fr.arcs), fr.entry,
                   {n: o for n, o in self.origin.items() if n in nodes},
                   tuple(mk for mk in self.markers if mk[0] in nodes))


def build_expr_cfg(e: A.Expr, t: NodeId, f: NodeId, m: NodeId, i: int) -> tuple[Cfg, NodeId]:
    b = _Builder(i)
    fr = b.expr(mark_constants(e), t, f, m, (0, 0))
    return b.graph(fr), fr.next


def build_label_cfg(lab: A.Label, t: NodeId, m: NodeId) -> tuple[Cfg, LabelMultimap, NodeId]:
    b = _Builder(0)
    fr = b.label(lab, t, m, (0, 0))
    return b.graph(fr), tuple(fr.ms), fr.next


def build_stmt_cfg(s: A.Stmt, t: NodeId, tb: Optional[NodeId], tc: Optional[NodeId],
                   m: NodeId, i: int) -> tuple[Cfg, LabelMultimap, GotoMap, NodeId]:
    b = _Builder(i)
    fr = b.stmt(mark_constants_in(s), t, tb, tc, m)
    return b.graph(fr), tuple(fr.ms), tuple(fr.mg), fr.next


def build_body_cfg(body: A.FunctionBody, i: int) -> Cfg:
    """CFG of a whole function body, with goto arcs resolved."""
    b = _Builder(i)
    fr = b.stmt(mark_constants_in(body.body), 0, None, None, 1)
    labels: dict[str, list[NodeId]] = {}
    for k, n in fr.ms:
        labels.setdefault(k, []).append(n)
    for name, g in fr.mg:
        for n in labels.get(name, ()):
            fr.arcs.add((g, n))
    fr.nodes.add(0)
    b.note(0, "exit", (float("inf"), 2))
    return b.graph(fr)


# --------------------------------------------------------------------------
# Rendering


def to_dot(g: Cfg, name: str = "cfg") -> str:
    """Graphviz text for the reachable part of ``g``, in ascending node order."""
    r = g.reachable()
    exits = r.exits()
    lines = [f'digraph "{name}" {{']
    for n in sorted(r.nodes):
        attrs = []
        if n == r.entry:
            attrs.append("shape=diamond")
            if n in exits:
                attrs.append("peripheries=2")
        elif n in exits:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=ellipse")
        lines.append(f"  {n} [{', '.join(attrs)}];")
    for a, b in sorted(r.arcs):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
