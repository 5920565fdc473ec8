"""Abstract syntax for the analysed C subset.

Expressions are plain frozen dataclasses compared structurally.  Statements
additionally carry a program-order index (``order``) and a source position;
neither takes part in equality, so a statement rebuilt from the same text
compares equal to the original.

The statement tree is the only input to the metrics and to the reference
CFG construction, so everything here is immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Union


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Ice:
    """A non-literal integer constant expression, marked as one unit."""

    sub: "Expr"


@dataclass(frozen=True)
class Not:
    e: "Expr"


@dataclass(frozen=True)
class UnaryPlus:
    e: "Expr"


@dataclass(frozen=True)
class UnaryMinus:
    e: "Expr"


@dataclass(frozen=True)
class Paren:
    e: "Expr"


@dataclass(frozen=True)
class Cast:
    type_name: str
    e: "Expr"


@dataclass(frozen=True)
class OtherUnary:
    op: str
    e: "Expr"


@dataclass(frozen=True)
class And:
    e1: "Expr"
    e2: "Expr"


@dataclass(frozen=True)
class Or:
    e1: "Expr"
    e2: "Expr"


@dataclass(frozen=True)
class Comma:
    e1: "Expr"
    e2: "Expr"


@dataclass(frozen=True)
class BinCond:
    """GNU ``e1 ?: e2``."""

    e1: "Expr"
    e2: "Expr"


@dataclass(frozen=True)
class OtherBinary:
    op: str
    e1: "Expr"
    e2: "Expr"


@dataclass(frozen=True)
class Cond:
    e1: "Expr"
    e2: "Expr"
    e3: "Expr"


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple["Expr", ...] = ()


Expr = Union[
    Var, IntLit, Ice, Not, UnaryPlus, UnaryMinus, Paren, Cast, OtherUnary,
    And, Or, Comma, BinCond, OtherBinary, Cond, Call,
]

# Forms whose control flow is exactly that of their operand.
TRANSPARENT = (UnaryPlus, UnaryMinus, Paren, Cast)


def subexpressions(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Var, IntLit)):
        return ()
    if isinstance(e, Ice):
        return (e.sub,)
    if isinstance(e, Call):
        return e.args
    return tuple(getattr(e, f.name) for f in fields(e)
                 if f.name in ("e", "e1", "e2", "e3"))


# --------------------------------------------------------------------------
# Labels


@dataclass(frozen=True)
class Case:
    value: int


@dataclass(frozen=True)
class Default:
    pass


@dataclass(frozen=True)
class Id:
    name: str


Label = Union[Case, Default, Id]


# --------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class _Stmt:
    order: int = field(default=-1, compare=False, kw_only=True)
    line: int = field(default=0, compare=False, kw_only=True)
    col: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class ExprStmt(_Stmt):
    e: Expr


@dataclass(frozen=True)
class Seq(_Stmt):
    s1: "Stmt"
    s2: "Stmt"


@dataclass(frozen=True)
class Return(_Stmt):
    pass


@dataclass(frozen=True)
class ReturnExpr(_Stmt):
    e: Expr


@dataclass(frozen=True)
class IfElse(_Stmt):
    e: Expr
    s1: "Stmt"
    s2: "Stmt"


@dataclass(frozen=True)
class If(_Stmt):
    e: Expr
    s1: "Stmt"


@dataclass(frozen=True)
class Switch(_Stmt):
    e: Expr
    s: "Stmt"


@dataclass(frozen=True)
class While(_Stmt):
    e: Expr
    s: "Stmt"


@dataclass(frozen=True)
class DoWhile(_Stmt):
    s: "Stmt"
    e: Expr


@dataclass(frozen=True)
class For(_Stmt):
    e1: Expr
    e2: Expr
    e3: Expr
    s: "Stmt"


@dataclass(frozen=True)
class Break(_Stmt):
    pass


@dataclass(frozen=True)
class Continue(_Stmt):
    pass


@dataclass(frozen=True)
class Goto(_Stmt):
    label: str


@dataclass(frozen=True)
class Labeled(_Stmt):
    label: Label
    s: "Stmt"


@dataclass(frozen=True)
class Compound(_Stmt):
    s: "Stmt"


@dataclass(frozen=True)
class Other(_Stmt):
    pass


@dataclass(frozen=True)
class Empty(_Stmt):
    pass


Stmt = Union[
    ExprStmt, Seq, Return, ReturnExpr, IfElse, If, Switch, While, DoWhile,
    For, Break, Continue, Goto, Labeled, Compound, Other, Empty,
]

LOOPS = (While, DoWhile, For)


def substatements(s: Stmt) -> tuple[Stmt, ...]:
    """Direct children in textual order."""
    if isinstance(s, Seq):
        return (s.s1, s.s2)
    if isinstance(s, IfElse):
        return (s.s1, s.s2)
    if isinstance(s, (If,)):
        return (s.s1,)
    if isinstance(s, (Switch, While, DoWhile, For, Labeled, Compound)):
        return (s.s,)
    return ()


def statement_expressions(s: Stmt) -> tuple[Expr, ...]:
    if isinstance(s, (ExprStmt, ReturnExpr, IfElse, If, Switch, While, DoWhile)):
        return (s.e,)
    if isinstance(s, For):
        return (s.e1, s.e2, s.e3)
    return ()


def walk(s: Stmt) -> Iterator[Stmt]:
    """Pre-order traversal, which is also program order."""
    stack = [s]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(substatements(node)))


def last_order(s: Stmt) -> int:
    """Largest program-order index inside ``s``."""
    while True:
        kids = substatements(s)
        if not kids:
            return s.order
        s = kids[-1]


def seq(*stmts: Stmt) -> Stmt:
    """Left-nested sequence of ``stmts``; ``Empty`` when there are none."""
    if not stmts:
        return Empty()
    out = stmts[0]
    for s in stmts[1:]:
        out = Seq(out, s)
    return out


def flatten(s: Stmt) -> list[Stmt]:
    if isinstance(s, Seq):
        return flatten(s.s1) + flatten(s.s2)
    return [s]


def map_expressions(s: Stmt, fn) -> Stmt:
    """Rebuild ``s`` with ``fn`` applied to every top-level expression."""
    kids = substatements(s)
    changes = {}
    if isinstance(s, (ExprStmt, ReturnExpr, IfElse, If, Switch, While, DoWhile)):
        changes["e"] = fn(s.e)
    elif isinstance(s, For):
        changes.update(e1=fn(s.e1), e2=fn(s.e2), e3=fn(s.e3))
    if isinstance(s, (Seq, IfElse)):
        changes.update(s1=map_expressions(kids[0], fn),
                       s2=map_expressions(kids[1], fn))
    elif isinstance(s, If):
        changes["s1"] = map_expressions(kids[0], fn)
    elif kids:
        changes["s"] = map_expressions(kids[0], fn)
    return replace(s, **changes) if changes else s


def number(s: Stmt, start: int = 0) -> Stmt:
    """Assign pre-order indices ``start, start+1, ...`` to every statement."""
    counter = [start]

    def go(node: Stmt) -> Stmt:
        idx = counter[0]
        counter[0] += 1
        if isinstance(node, (Seq, IfElse)):
            a = go(node.s1)
            b = go(node.s2)
            return replace(node, s1=a, s2=b, order=idx)
        if isinstance(node, If):
            return replace(node, s1=go(node.s1), order=idx)
        if isinstance(node, (Switch, While, DoWhile, For, Labeled, Compound)):
            return replace(node, s=go(node.s), order=idx)
        return replace(node, order=idx)

    return go(s)


# --------------------------------------------------------------------------
# Function bodies and validation


@dataclass(frozen=True)
class FunctionBody:
    name: str
    params: tuple[str, ...]
    body: Stmt
    labels: frozenset[str] = frozenset()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)
    end_line: int = field(default=0, compare=False)


def make_body(name: str, params, body: Stmt, line: int = 0, col: int = 0,
              end_line: int = 0) -> FunctionBody:
    """Build a :class:`FunctionBody` with program order and label set filled in."""
    body = number(body)
    fb = FunctionBody(name, tuple(params), body, frozenset(), line, col, end_line)
    return replace(fb, labels=frozenset(collect_labels(fb)))


def collect_labels(body: FunctionBody) -> set[str]:
    return {s.label.name for s in walk(body.body)
            if isinstance(s, Labeled) and isinstance(s.label, Id)}


@dataclass(frozen=True)
class SemanticError:
    kind: str
    message: str
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.kind}: {self.message}"


def validate_body(body: FunctionBody) -> list[SemanticError]:
    """Check label, jump and switch well-formedness.

    Returns one error per violation; an empty list means the body can be
    handed to the CFG builder and to the metrics.
    """
    errors: list[SemanticError] = []
    seen: dict[str, Stmt] = {}
    gotos: list[Goto] = []

    def err(kind: str, msg: str, s: Stmt) -> None:
        errors.append(SemanticError(kind, msg, s.line, s.col))

    # defaults[-1] counts the default labels of the innermost open switch
    def go(s: Stmt, in_loop: bool, in_breakable: bool, defaults: list) -> None:
        if isinstance(s, Break) and not in_breakable:
            err("StrayBreak", "break outside loop or switch", s)
        elif isinstance(s, Continue) and not in_loop:
            err("StrayContinue", "continue outside loop", s)
        elif isinstance(s, Goto):
            gotos.append(s)
        elif isinstance(s, Labeled):
            lab = s.label
            if isinstance(lab, Id):
                if lab.name in seen:
                    err("DuplicateLabel", f"label '{lab.name}' defined twice", s)
                else:
                    seen[lab.name] = s
            elif not defaults:
                err("StrayCase", "case or default label outside switch", s)
            elif isinstance(lab, Default):
                defaults[-1] += 1
                if defaults[-1] > 1:
                    err("MultipleDefaults", "more than one default label in switch", s)
        if isinstance(s, Switch):
            go(s.s, in_loop, True, defaults + [0])
            return
        loop = isinstance(s, LOOPS)
        for kid in substatements(s):
            go(kid, in_loop or loop, in_breakable or loop, defaults)

    go(body.body, False, False, [])
    for g in gotos:
        if g.label not in seen:
            err("UndefinedLabel", f"goto to undefined label '{g.label}'", g)
    return errors
