"""Test-input generation and differential checking against the path oracle.

Three generators live here: arbitrary digraphs turned into C bodies whose
CFG has the same acyclic-path count, random expressions, and random
controlled function bodies.  :func:`differential_check` compares ACPATH
with the brute-force count and :func:`shrink` minimises a failing body.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Optional

from . import ast as A
from .acpath import acpath_body, expr_paths, is_controlled
from .cfg import Cfg, build_body_cfg
from .npath import npath_body
from .oracle import DEFAULT_BUDGET, BudgetExceeded, OracleBudget, count_acyclic_paths


# --------------------------------------------------------------------------
# Digraphs and their embedding as C code


class NoReachableExit(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset
    entry: int = 0

    def __post_init__(self):
        if not 0 <= self.entry < self.n:
            raise ValueError("entry must be a node")
        if any(not (0 <= a < self.n and 0 <= b < self.n) for a, b in self.arcs):
            raise ValueError("arc endpoint out of range")

    @property
    def exits(self) -> frozenset:
        sources = {a for a, _ in self.arcs}
        return frozenset(k for k in range(self.n) if k not in sources)

    def successors(self, k: int) -> list[int]:
        return sorted(b for a, b in self.arcs if a == k)

    def to_cfg(self) -> Cfg:
        return Cfg(frozenset(range(self.n)), frozenset(self.arcs), self.entry)


def _reaches_exit(g: Digraph) -> bool:
    seen, stack = {g.entry}, [g.entry]
    while stack:
        k = stack.pop()
        if k in g.exits:
            return True
        for m in g.successors(k):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return False


def embed_graph(g: Digraph, name: str = "embedded", stacked_default: bool = True) -> A.FunctionBody:
    """A function body whose CFG has exactly the acyclic paths of ``g``.

    Node ``k`` becomes the label ``n<k>``.  A node with successors turns into
    a switch on a fresh variable ``x<k>`` with one ``goto`` per arc, the last
    one also taking the default; an exit node turns into ``return;``.
    """
    if not _reaches_exit(g):
        raise NoReachableExit("no exit node is reachable from the entry")
    exits = g.exits
    rest = [k for k in range(g.n) if k != g.entry]
    order = [g.entry] + [k for k in rest if k not in exits] + [k for k in rest if k in exits]
    items = []
    for k in order:
        succ = g.successors(k)
        if not succ:
            body: A.Stmt = A.Return()
        else:
            cases = []
            for j, m in enumerate(succ, 1):
                target: A.Stmt = A.Goto(f"n{m}")
                if j < len(succ):
                    cases.append(A.Labeled(A.Case(j), target))
                elif stacked_default:
                    cases.append(A.Labeled(A.Case(j), A.Labeled(A.Default(), target)))
                else:
                    cases.append(A.Labeled(A.Default(), target))
            body = A.Switch(A.Var(f"x{k}"), A.Compound(A.seq(*cases)))
        items.append(A.Labeled(A.Id(f"n{k}"), body))
    params = tuple(f"x{k}" for k in order if k not in exits)
    return A.make_body(name, params, A.seq(*items))


def random_digraph(rng: random.Random, max_nodes: int = 8, max_arcs: int = 16) -> Digraph:
    """A random digraph with entry 0 and at least one exit reachable from it."""
    while True:
        n = rng.randint(1, max_nodes)
        pairs = [(a, b) for a in range(n) for b in range(n)]
        k = rng.randint(0, min(max_arcs, len(pairs)))
        g = Digraph(n, frozenset(rng.sample(pairs, k)), 0)
        if _reaches_exit(g):
            return g


# --------------------------------------------------------------------------
# Random expressions

_BINOPS = ("+", "-", "*", "<", "==", "&", "|", "^", "<<", "=")
_UNOPS = ("~", "++", "sizeof")


def random_expr(rng: random.Random, depth: int = 5, constants: bool = True,
                names: tuple = ("a", "b", "c", "d")) -> A.Expr:
    """An expression drawn from the whole grammar, at most ``depth`` deep."""
    if depth <= 0 or rng.random() < 0.25:
        if constants and rng.random() < 0.35:
            return A.IntLit(rng.choice((0, 1, 2)))
        return A.Var(rng.choice(names))

    def sub():
        return random_expr(rng, depth - 1, constants, names)

    kind = rng.randrange(14)
    if kind == 0:
        return A.Not(sub())
    if kind == 1:
        return rng.choice((A.UnaryPlus, A.UnaryMinus, A.Paren))(sub())
    if kind == 2:
        return A.Cast("int", sub())
    if kind == 3:
        return A.OtherUnary(rng.choice(_UNOPS), sub())
    if kind in (4, 5):
        return A.And(sub(), sub())
    if kind in (6, 7):
        return A.Or(sub(), sub())
    if kind == 8:
        return A.Comma(sub(), sub())
    if kind == 9:
        return A.BinCond(sub(), sub())
    if kind == 10:
        return A.OtherBinary(rng.choice(_BINOPS), sub(), sub())
    if kind in (11, 12):
        return A.Cond(sub(), sub(), sub())
    return A.Call(rng.choice(("g", "h")), tuple(sub() for _ in range(rng.randint(0, 2))))


# --------------------------------------------------------------------------
# Random controlled bodies


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_depth: int = 3
    max_stmts: int = 8
    loops: bool = True
    switches: bool = True
    gotos: bool = True
    constants: bool = True
    max_cfg_nodes: int = 25
    expr_depth: int = 2


_PENDING = "?"


class _BodyGen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.budget = cfg.max_stmts
        self.labels = 0

    def expr(self) -> A.Expr:
        return random_expr(self.rng, self.rng.randint(0, self.cfg.expr_depth),
                           self.cfg.constants, ("a", "b", "c"))

    def block(self, depth, in_loop, breakable) -> A.Stmt:
        items = []
        for _ in range(self.rng.randint(1, 3)):
            if self.budget <= 0:
                break
            items.append(self.stmt(depth, in_loop, breakable))
        return A.seq(*items)

    def stmt(self, depth, in_loop, breakable) -> A.Stmt:
        rng, cfg = self.rng, self.cfg
        self.budget -= 1
        choices = ["expr", "empty", "return"]
        if depth < cfg.max_depth and self.budget > 0:
            choices += ["if", "if", "ifelse", "block"]
            if cfg.loops:
                choices += ["while", "dowhile", "for"]
            if cfg.switches:
                choices += ["switch"]
        if breakable:
            choices += ["break"]
        if in_loop:
            choices += ["continue"]
        if cfg.gotos:
            choices += ["goto", "label"]
        kind = rng.choice(choices)
        d = depth + 1
        if kind == "expr":
            return A.ExprStmt(self.expr())
        if kind == "empty":
            return A.Empty()
        if kind == "return":
            return A.Return() if rng.random() < 0.5 else A.ReturnExpr(self.expr())
        if kind == "break":
            return A.Break()
        if kind == "continue":
            return A.Continue()
        if kind == "goto":
            return A.Goto(_PENDING)
        if kind == "label":
            self.labels += 1
            return A.Labeled(A.Id(f"L{self.labels}"), self.stmt(depth, in_loop, breakable))
        if kind == "if":
            return A.If(self.expr(), self.block(d, in_loop, breakable))
        if kind == "ifelse":
            return A.IfElse(self.expr(), self.block(d, in_loop, breakable),
                            self.block(d, in_loop, breakable))
        if kind == "block":
            return A.Compound(self.block(d, in_loop, breakable))
        if kind == "while":
            return A.While(self.expr(), A.Compound(self.block(d, True, True)))
        if kind == "dowhile":
            return A.DoWhile(A.Compound(self.block(d, True, True)), self.expr())
        if kind == "for":
            return A.For(self.expr(), self.expr(), self.expr(),
                         A.Compound(self.block(d, True, True)))
        return self.switch(d, in_loop)

    def switch(self, depth, in_loop) -> A.Stmt:
        rng = self.rng
        groups = []
        values = rng.sample(range(1, 6), rng.randint(1, 3))
        default_at = rng.randrange(len(values) + 1) if rng.random() < 0.6 else None
        for j, v in enumerate(values + [None]):
            if v is None and default_at is None:
                break
            body = self.block(depth, in_loop, True) if self.budget > 0 else A.Empty()
            if v is None:
                groups.append(A.Labeled(A.Default(), body))
            else:
                groups.append(A.Labeled(A.Case(v), body))
        if default_at is not None and len(groups) > 1:
            groups.insert(default_at, groups.pop())
        return A.Switch(self.expr(), A.Compound(A.seq(*groups)))


def _enclosing_loops(body: A.Stmt) -> dict[int, frozenset]:
    """Map each statement order to the orders of the loops around it."""
    out: dict[int, frozenset] = {}

    def go(s, loops):
        out[s.order] = loops
        inner = loops | {s.order} if isinstance(s, A.LOOPS) else loops
        for k in A.substatements(s):
            go(k, inner)

    go(body, frozenset())
    return out


def _replace_at(s: A.Stmt, order: int, new: A.Stmt) -> A.Stmt:
    """Copy of ``s`` with the statement numbered ``order`` replaced by ``new``."""
    if s.order == order:
        return new
    if isinstance(s, (A.Seq, A.IfElse)):
        return replace(s, s1=_replace_at(s.s1, order, new), s2=_replace_at(s.s2, order, new))
    if isinstance(s, A.If):
        return replace(s, s1=_replace_at(s.s1, order, new))
    if A.substatements(s):
        return replace(s, s=_replace_at(s.s, order, new))
    return s


def _resolve_gotos(body: A.Stmt, rng: random.Random) -> A.Stmt:
    """Point each pending goto at a later label that is not inside a foreign loop."""
    body = A.number(body)
    loops = _enclosing_loops(body)
    labels = [s for s in A.walk(body) if isinstance(s, A.Labeled) and isinstance(s.label, A.Id)]
    for g in [s for s in A.walk(body) if isinstance(s, A.Goto)]:
        ok = [lab for lab in labels
              if lab.order > g.order and loops[lab.order] <= loops[g.order]]
        new = A.Goto(rng.choice(ok).label.name) if ok else A.Empty()
        body = _replace_at(body, g.order, replace(new, order=g.order))
    return body


def gen_controlled_body(cfg: GenConfig, name: str = "gen") -> A.FunctionBody:
    """A random body that validates, is controlled, and has a small CFG.

    Candidates whose level-0 CFG has more than ``cfg.max_cfg_nodes``
    reachable nodes are discarded and drawn again from the same stream, so
    the result depends only on the configuration.
    """
    rng = random.Random(cfg.seed)
    while True:
        gen = _BodyGen(cfg, rng)
        body = _resolve_gotos(gen.block(0, False, False), rng)
        fb = A.make_body(name, ("a", "b", "c"), body)
        if A.validate_body(fb) or not is_controlled(fb).controlled:
            continue
        if len(build_body_cfg(fb, 0).reachable().nodes) <= cfg.max_cfg_nodes:
            return fb


def random_statement(rng: random.Random, max_stmts: int = 8) -> A.FunctionBody:
    """A random body that may break the controlled-body rules but still validates."""
    while True:
        cfg = GenConfig(seed=rng.getrandbits(64), max_stmts=max_stmts)
        gen = _BodyGen(cfg, random.Random(cfg.seed))
        fb = A.make_body("s", (), _resolve_gotos(gen.block(0, False, False), rng))
        if not A.validate_body(fb):
            return fb


# --------------------------------------------------------------------------
# Differential checking


@dataclass(frozen=True)
class Verdict:
    acpath: int
    alpha: Optional[int]
    controlled: bool
    match: Optional[bool]
    npath: int
    quarantined: bool = False
    note: str = ""


def _escapes_by_return(s: A.Stmt) -> bool:
    lo, hi = s.order, A.last_order(s)
    labels = {}
    for k in A.walk(s):
        if isinstance(k, A.Labeled) and isinstance(k.label, A.Id):
            labels[k.label.name] = k.order
    for k in A.walk(s):
        if isinstance(k, (A.Return, A.ReturnExpr)):
            return True
        if isinstance(k, A.Goto) and not lo <= labels.get(k.label, -1) <= hi:
            return True
    return False


def while_return_hazard(b: A.FunctionBody, i: int) -> bool:
    """A while or for loop whose guard has several true paths and whose body returns.

    Gotos out of the loop count as returns.  This is the one shape where the
    loop rule and the brute-force count are known to disagree on controlled
    bodies.
    """
    for s in A.walk(b.body):
        guard = s.e if isinstance(s, A.While) else s.e2 if isinstance(s, A.For) else None
        if guard is not None and expr_paths(guard, i).tp > 1 and _escapes_by_return(s):
            return True
    return False


def differential_check(b: A.FunctionBody, i: int, budget: OracleBudget = DEFAULT_BUDGET,
                       while_return_scaling: bool = False) -> Verdict:
    """Compare ACPATH with the oracle's acyclic-path count on the reference CFG."""
    ap = acpath_body(b, i, while_return_scaling)
    controlled = is_controlled(b).controlled
    np_ = npath_body(b)
    try:
        alpha = count_acyclic_paths(build_body_cfg(b, i), budget)
    except BudgetExceeded:
        return Verdict(ap, None, controlled, None, np_, note="oracle budget exceeded")
    match = ap == alpha
    if match:
        return Verdict(ap, alpha, controlled, True, np_)
    if not controlled:
        return Verdict(ap, alpha, controlled, False, np_, note="expected: body is not controlled")
    if while_return_hazard(b, i) and not while_return_scaling:
        return Verdict(ap, alpha, controlled, False, np_, quarantined=True,
                       note="known discrepancy: return inside a loop with a multi-path guard")
    return Verdict(ap, alpha, controlled, False, np_, note="defect candidate")


def classify_mismatch(b: A.FunctionBody, i: int, budget: OracleBudget = DEFAULT_BUDGET) -> str:
    """Best guess at why ACPATH and the oracle disagree on a controlled body."""
    if differential_check(b, i, budget, while_return_scaling=True).match:
        return "while-return"
    if any(isinstance(s, A.DoWhile) and _do_while_escapes(s) for s in A.walk(b.body)):
        return "do-while-exit"
    if i > 0 and differential_check(b, 0, budget).match:
        return "constant-folding"
    return "unknown"


def _do_while_escapes(s: A.DoWhile) -> bool:
    hi = A.last_order(s)
    labels = {k.label.name: k.order for k in A.walk(s)
              if isinstance(k, A.Labeled) and isinstance(k.label, A.Id)}

    # continue counts too: it reaches the guard, and so the back arc
    def go(k, in_loop, in_switch):
        if isinstance(k, (A.Return, A.ReturnExpr)):
            return True
        if isinstance(k, A.Break) and not (in_loop or in_switch):
            return True
        if isinstance(k, A.Continue) and not in_loop:
            return True
        if isinstance(k, A.Goto) and labels.get(k.label, hi + 1) > hi:
            return True
        loop = in_loop or isinstance(k, A.LOOPS)
        switch = in_switch or isinstance(k, A.Switch)
        return any(go(c, loop, switch) for c in A.substatements(k))

    return go(s.s, False, False)


def shrink(b: A.FunctionBody, failing: Callable[[A.FunctionBody], bool]) -> A.FunctionBody:
    """Smallest body found that still satisfies ``failing``.

    Top-level statements are removed by bisection first, then single
    statements anywhere in the tree are replaced with ``;`` one at a time.
    Candidates that no longer validate are skipped.
    """
    def rebuild(stmts):
        return A.make_body(b.name, b.params, A.seq(*stmts))

    def still(fb):
        return not A.validate_body(fb) and failing(fb)

    items = A.flatten(b.body)
    chunk = max(1, len(items) // 2)
    while chunk >= 1 and len(items) > 1:
        removed = False
        for start in range(0, len(items), chunk):
            trial = items[:start] + items[start + chunk:]
            if trial and still(rebuild(trial)):
                items = trial
                removed = True
                break
        if not removed:
            chunk //= 2
    best = rebuild(items)
    progress = True
    while progress:
        progress = False
        for s in A.walk(best.body):
            for smaller in _simpler(s):
                trial = A.make_body(b.name, b.params, _replace_at(best.body, s.order, smaller))
                if still(trial):
                    best = trial
                    progress = True
                    break
            if progress:
                break
    return best


def _simpler(s: A.Stmt) -> list[A.Stmt]:
    """Smaller statements to try in place of ``s``."""
    if isinstance(s, A.Empty):
        return []
    out = list(A.substatements(s))
    if not isinstance(s, A.Seq):
        out.append(A.Empty())
    return out


# --------------------------------------------------------------------------
# Expression counts from the oracle


def oracle_expr_paths(e: A.Expr, i: int, budget: OracleBudget = DEFAULT_BUDGET):
    """``(tp, fp, pp)`` and ``(tt, tf, ff, pp2)`` of ``e`` counted on its CFG.

    True and false exits are nodes 0 and 1; the either-way counts use a
    second CFG in which both exits are node 0.
    """
    from .acpath import ExprPairPaths, ExprPaths
    from .cfg import build_expr_cfg
    from .oracle import count_path_pairs, count_paths_to

    split, _ = build_expr_cfg(e, 0, 1, 2, i)
    merged, _ = build_expr_cfg(e, 0, 0, 2, i)

    def tau(g, n):
        return count_paths_to(g, n, budget) if n in g.nodes else 0

    def delta(g, x, y):
        return count_path_pairs(g, x, y, budget) if {x, y} <= g.nodes else 0

    single = ExprPaths(tau(split, 0), tau(split, 1), tau(merged, 0))
    pairs = ExprPairPaths(delta(split, 0, 0), delta(split, 0, 1),
                          delta(split, 1, 1), delta(merged, 0, 0))
    return single, pairs
