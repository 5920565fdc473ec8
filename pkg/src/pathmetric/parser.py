"""Recursive-descent frontend for the C subset, plus a source printer.

Only control flow matters downstream, so anything that is not a logical
operator, a conditional, a comma, a cast or one of the transparent unary
forms is kept as an opaque ``OtherUnary``/``OtherBinary`` node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast as A

_TYPES = ("int", "void")
_KEYWORDS = frozenset(_TYPES + (
    "if", "else", "switch", "case", "default", "while", "do", "for",
    "break", "continue", "goto", "return", "sizeof",
))

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+|\n)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<pp>\#[^\n]*)
  | (?P<num>0[xX][0-9a-fA-F]+[uUlL]*|[0-9]+[uUlL]*)
  | (?P<char>'(?:\\.|[^\\'\n])+')
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><<=|>>=|\.\.\.|->|\+\+|--|<<|>>|<=|>=|==|!=|&&|\|\||[-+*/%&|^]=
        |[?:;,(){}\[\].!~+\-*/%<>&^|=])
""", re.VERBOSE | re.DOTALL)

_CHAR_ESCAPES = {"n": 10, "t": 9, "r": 13, "0": 0, "\\": 92, "'": 39,
                 '"': 34, "a": 7, "b": 8, "f": 12, "v": 11}


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str


@dataclass
class ParseError(Exception):
    line: int
    col: int
    expected: str
    found: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: expected {self.expected}, found {self.found!r}"


@dataclass(frozen=True)
class Token:
    kind: str          # "ident", "num", "op", "kw", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token", text[pos])
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        if kind == "ident" and value in _KEYWORDS:
            kind = "kw"
        if kind == "char":
            kind = "num"
        if kind in ("ident", "kw", "num", "op"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "<end of input>", line, pos - line_start + 1))
    return tokens


def _int_value(text: str) -> int:
    if text.startswith("'"):
        body = text[1:-1]
        if body.startswith("\\"):
            esc = body[1:]
            if esc in _CHAR_ESCAPES:
                return _CHAR_ESCAPES[esc]
            if esc.startswith("x"):
                return int(esc[1:], 16)
            return int(esc, 8)
        return ord(body[0])
    text = text.rstrip("uUlL")
    if text.lower().startswith("0x"):
        return int(text, 16)
    if len(text) > 1 and text.startswith("0"):
        return int(text, 8)
    return int(text)


_BINARY_LEVELS = [
    ("|",), ("^",), ("&",), ("==", "!="), ("<", ">", "<=", ">="),
    ("<<", ">>"), ("+", "-"), ("*", "/", "%"),
]
_ASSIGN_OPS = frozenset(("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                         "<<=", ">>="))


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"'{text}'")
        return self.advance()

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.col, expected, t.text)

    def at_type(self) -> bool:
        return self.tok.kind == "kw" and self.tok.text in _TYPES

    # -- expressions -------------------------------------------------------

    def expression(self) -> A.Expr:
        e = self.assignment()
        while self.at(","):
            self.advance()
            e = A.Comma(e, self.assignment())
        return e

    def assignment(self) -> A.Expr:
        lhs = self.conditional()
        if self.tok.kind == "op" and self.tok.text in _ASSIGN_OPS:
            op = self.advance().text
            return A.OtherBinary(op, lhs, self.assignment())
        return lhs

    def conditional(self) -> A.Expr:
        c = self.logical_or()
        if not self.at("?"):
            return c
        self.advance()
        if self.at(":"):
            self.advance()
            return A.BinCond(c, self.conditional())
        then = self.expression()
        self.expect(":")
        return A.Cond(c, then, self.conditional())

    def logical_or(self) -> A.Expr:
        e = self.logical_and()
        while self.at("||"):
            self.advance()
            e = A.Or(e, self.logical_and())
        return e

    def logical_and(self) -> A.Expr:
        e = self.binary(0)
        while self.at("&&"):
            self.advance()
            e = A.And(e, self.binary(0))
        return e

    def binary(self, level: int) -> A.Expr:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        e = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.advance().text
            e = A.OtherBinary(op, e, self.binary(level + 1))
        return e

    def unary(self) -> A.Expr:
        t = self.tok
        if t.kind == "op":
            if t.text == "!":
                self.advance()
                return A.Not(self.unary())
            if t.text == "+":
                self.advance()
                return A.UnaryPlus(self.unary())
            if t.text == "-":
                self.advance()
                return A.UnaryMinus(self.unary())
            if t.text in ("~", "*", "&", "++", "--"):
                self.advance()
                return A.OtherUnary(t.text, self.unary())
            if t.text == "(" and self.peek().kind == "kw" and self.peek().text in _TYPES:
                self.advance()
                type_name = self.advance().text
                while self.at("*"):
                    self.advance()
                    type_name += "*"
                self.expect(")")
                return A.Cast(type_name, self.unary())
        if t.kind == "kw" and t.text == "sizeof":
            self.advance()
            return A.OtherUnary("sizeof", self.unary())
        return self.postfix()

    def postfix(self) -> A.Expr:
        e = self.primary()
        while True:
            if self.at("("):
                if not isinstance(e, A.Var):
                    self.fail("a function name before '('")
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.assignment())
                    while self.at(","):
                        self.advance()
                        args.append(self.assignment())
                self.expect(")")
                e = A.Call(e.name, tuple(args))
            elif self.at("["):
                self.advance()
                idx = self.expression()
                self.expect("]")
                e = A.OtherBinary("[]", e, idx)
            elif self.at("++") or self.at("--"):
                e = A.OtherUnary("post" + self.advance().text, e)
            else:
                return e

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return A.Var(t.text)
        if t.kind == "num":
            self.advance()
            return A.IntLit(_int_value(t.text))
        if self.at("("):
            self.advance()
            e = self.expression()
            self.expect(")")
            return A.Paren(e)
        self.fail("an expression")

    # -- statements --------------------------------------------------------

    def statement(self) -> A.Stmt:
        t = self.tok
        pos = {"line": t.line, "col": t.col}
        if self.at("{"):
            self.advance()
            items = self.block_items()
            self.expect("}")
            return A.Compound(A.seq(*items), **pos)
        if self.at(";"):
            self.advance()
            return A.Empty(**pos)
        if self.at_type():
            return self.declaration()
        if t.kind == "kw":
            kw = t.text
            if kw == "if":
                self.advance()
                e = self.paren_expression()
                s1 = self.statement()
                if self.at("else"):
                    self.advance()
                    return A.IfElse(e, s1, self.statement(), **pos)
                return A.If(e, s1, **pos)
            if kw in ("switch", "while"):
                self.advance()
                e = self.paren_expression()
                body = self.statement()
                cls = A.Switch if kw == "switch" else A.While
                return cls(e, body, **pos)
            if kw == "do":
                self.advance()
                body = self.statement()
                self.expect("while")
                e = self.paren_expression()
                self.expect(";")
                return A.DoWhile(body, e, **pos)
            if kw == "for":
                return self.for_statement(pos)
            if kw in ("break", "continue"):
                self.advance()
                self.expect(";")
                return (A.Break if kw == "break" else A.Continue)(**pos)
            if kw == "goto":
                self.advance()
                if self.tok.kind != "ident":
                    self.fail("a label name")
                name = self.advance().text
                self.expect(";")
                return A.Goto(name, **pos)
            if kw == "return":
                self.advance()
                if self.at(";"):
                    self.advance()
                    return A.Return(**pos)
                e = self.expression()
                self.expect(";")
                return A.ReturnExpr(e, **pos)
            if kw == "case":
                self.advance()
                value = self.case_value()
                self.expect(":")
                return A.Labeled(A.Case(value), self.labeled_body(), **pos)
            if kw == "default":
                self.advance()
                self.expect(":")
                return A.Labeled(A.Default(), self.labeled_body(), **pos)
        if t.kind == "ident" and self.peek().kind == "op" and self.peek().text == ":":
            self.advance()
            self.advance()
            return A.Labeled(A.Id(t.text), self.labeled_body(), **pos)
        e = self.expression()
        self.expect(";")
        return A.ExprStmt(e, **pos)

    def labeled_body(self) -> A.Stmt:
        # tolerate a label right before the closing brace
        if self.at("}"):
            return A.Empty(line=self.tok.line, col=self.tok.col)
        return self.statement()

    def case_value(self) -> int:
        from .cfg import eval_ice

        t = self.tok
        value = eval_ice(self.conditional())
        if value is None:
            raise ParseError(t.line, t.col, "an integer constant expression", t.text)
        return value

    def paren_expression(self) -> A.Expr:
        self.expect("(")
        e = self.expression()
        self.expect(")")
        return e

    def for_statement(self, pos) -> A.Stmt:
        self.advance()
        self.expect("(")
        if self.at_type():
            init = self.declaration_initializers()
        else:
            init = None if self.at(";") else self.expression()
            self.expect(";")
        guard = None if self.at(";") else self.expression()
        self.expect(";")
        step = None if self.at(")") else self.expression()
        self.expect(")")
        body = self.statement()
        one = A.IntLit(1)
        return A.For(init or one, guard or one, step or one, body, **pos)

    def declaration_initializers(self):
        """Parse ``type declarator[= init], ... ;`` and return the comma of inits."""
        self.advance()
        inits = []
        while True:
            while self.at("*"):
                self.advance()
            if self.tok.kind != "ident":
                self.fail("a declarator name")
            self.advance()
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    self.conditional()
                self.expect("]")
            if self.at("="):
                self.advance()
                inits.append(self.assignment())
            if not self.at(","):
                break
            self.advance()
        self.expect(";")
        out = None
        for e in inits:
            out = e if out is None else A.Comma(out, e)
        return out

    def declaration(self) -> A.Stmt:
        t = self.tok
        e = self.declaration_initializers()
        if e is None:
            return A.Empty(line=t.line, col=t.col)
        return A.ExprStmt(e, line=t.line, col=t.col)

    def block_items(self) -> list[A.Stmt]:
        items = []
        while not self.at("}") and self.tok.kind != "eof":
            items.append(self.statement())
        return items

    # -- top level ---------------------------------------------------------

    def function(self) -> A.FunctionBody | None:
        """Parse one top-level item; returns None for prototypes and globals."""
        start = self.tok
        if not self.at_type():
            self.fail("'int' or 'void'")
        self.advance()
        while self.at("*"):
            self.advance()
        if self.tok.kind != "ident":
            self.fail("a function name")
        name = self.advance().text
        if not self.at("("):
            # global variable: skip to the terminating ';'
            while not self.at(";"):
                if self.tok.kind == "eof":
                    self.fail("';'")
                self.advance()
            self.advance()
            return None
        self.advance()
        params: list[str] = []
        if self.at("void") and self.peek().kind == "op" and self.peek().text == ")":
            self.advance()
        elif not self.at(")"):
            while True:
                if not self.at_type():
                    self.fail("a parameter type")
                self.advance()
                while self.at("*"):
                    self.advance()
                if self.tok.kind == "ident":
                    params.append(self.advance().text)
                else:
                    params.append("")      # unnamed, only legal in a prototype
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        if self.at(";"):
            self.advance()
            return None
        if "" in params:
            self.fail("a parameter name")
        self.expect("{")
        items = self.block_items()
        end = self.expect("}")
        return A.make_body(name, params, A.seq(*items), start.line, start.col, end.line)

    def skip_item(self, start: int) -> None:
        """Resume after the top-level item that began at token index ``start``."""
        self.i = start
        depth = 0
        while self.tok.kind != "eof":
            t = self.advance()
            if t.kind != "op":
                continue
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth -= 1
                if depth <= 0:
                    return
            elif t.text == ";" and depth == 0:
                return


def parse_translation_unit(file: SourceFile) -> tuple[list[A.FunctionBody], list[ParseError]]:
    """Parse every function in ``file``; a malformed function is skipped, not fatal."""
    try:
        tokens = tokenize(file.text)
    except ParseError as exc:
        return [], [exc]
    p = _Parser(tokens)
    functions: list[A.FunctionBody] = []
    errors: list[ParseError] = []
    while p.tok.kind != "eof":
        start = p.i
        try:
            fn = p.function()
        except ParseError as exc:
            errors.append(exc)
            p.skip_item(start)
            continue
        if fn is not None:
            functions.append(fn)
    return functions, errors


def parse_expression(text: str) -> A.Expr:
    p = _Parser(tokenize(text))
    e = p.expression()
    if p.tok.kind != "eof":
        p.fail("end of expression")
    return e


def parse_body(text: str, name: str = "f") -> A.FunctionBody:
    """Parse a sequence of statements as the body of a parameterless function."""
    p = _Parser(tokenize(text))
    items = p.block_items()
    if p.tok.kind != "eof":
        p.fail("a statement")
    return A.make_body(name, (), A.seq(*items), 1, 1)


# --------------------------------------------------------------------------
# Printing

_PREC_COMMA, _PREC_ASSIGN, _PREC_COND, _PREC_OR, _PREC_AND = 1, 2, 3, 4, 5
_PREC_UNARY, _PREC_POSTFIX, _PREC_PRIMARY = 14, 15, 16
_BINARY_PREC = {op: 6 + k for k, ops in enumerate(_BINARY_LEVELS) for op in ops}


def _wrap(text_prec: tuple[str, int], need: int) -> str:
    text, prec = text_prec
    return f"({text})" if prec < need else text


def _prefix(op: str, operand: str) -> str:
    sep = " " if operand[:1] in ("+", "-", "&") and operand[:1] == op[-1] else ""
    return op + sep + operand


def _fmt(e: A.Expr) -> tuple[str, int]:
    if isinstance(e, A.Var):
        return e.name, _PREC_PRIMARY
    if isinstance(e, A.IntLit):
        if e.value < 0:
            return f"-{-e.value}", _PREC_UNARY
        return str(e.value), _PREC_PRIMARY
    if isinstance(e, A.Ice):
        return _fmt(e.sub)
    if isinstance(e, A.Paren):
        return f"({_fmt(e.e)[0]})", _PREC_PRIMARY
    if isinstance(e, (A.Not, A.UnaryPlus, A.UnaryMinus)):
        op = {A.Not: "!", A.UnaryPlus: "+", A.UnaryMinus: "-"}[type(e)]
        return _prefix(op, _wrap(_fmt(e.e), _PREC_UNARY)), _PREC_UNARY
    if isinstance(e, A.Cast):
        return f"({e.type_name}){_wrap(_fmt(e.e), _PREC_UNARY)}", _PREC_UNARY
    if isinstance(e, A.OtherUnary):
        if e.op.startswith("post"):
            return _wrap(_fmt(e.e), _PREC_POSTFIX) + e.op[4:], _PREC_POSTFIX
        if e.op == "sizeof":
            return "sizeof " + _wrap(_fmt(e.e), _PREC_UNARY), _PREC_UNARY
        return _prefix(e.op, _wrap(_fmt(e.e), _PREC_UNARY)), _PREC_UNARY
    if isinstance(e, A.Call):
        args = ", ".join(_wrap(_fmt(a), _PREC_ASSIGN) for a in e.args)
        return f"{e.callee}({args})", _PREC_POSTFIX
    if isinstance(e, A.Comma):
        return (f"{_wrap(_fmt(e.e1), _PREC_COMMA)}, {_wrap(_fmt(e.e2), _PREC_ASSIGN)}",
                _PREC_COMMA)
    if isinstance(e, A.Cond):
        return (f"{_wrap(_fmt(e.e1), _PREC_OR)} ? {_fmt(e.e2)[0]} : "
                f"{_wrap(_fmt(e.e3), _PREC_COND)}", _PREC_COND)
    if isinstance(e, A.BinCond):
        return (f"{_wrap(_fmt(e.e1), _PREC_OR)} ?: {_wrap(_fmt(e.e2), _PREC_COND)}",
                _PREC_COND)
    if isinstance(e, (A.And, A.Or)):
        op, prec = ("&&", _PREC_AND) if isinstance(e, A.And) else ("||", _PREC_OR)
        return f"{_wrap(_fmt(e.e1), prec)} {op} {_wrap(_fmt(e.e2), prec + 1)}", prec
    if isinstance(e, A.OtherBinary):
        if e.op == "[]":
            return f"{_wrap(_fmt(e.e1), _PREC_POSTFIX)}[{_fmt(e.e2)[0]}]", _PREC_POSTFIX
        if e.op in _ASSIGN_OPS:
            return (f"{_wrap(_fmt(e.e1), _PREC_COND)} {e.op} "
                    f"{_wrap(_fmt(e.e2), _PREC_ASSIGN)}", _PREC_ASSIGN)
        prec = _BINARY_PREC[e.op]
        return f"{_wrap(_fmt(e.e1), prec)} {e.op} {_wrap(_fmt(e.e2), prec + 1)}", prec
    raise TypeError(f"not an expression: {e!r}")


def format_expr(e: A.Expr) -> str:
    return _fmt(e)[0]


def _label_text(lab: A.Label) -> str:
    if isinstance(lab, A.Case):
        return f"case {lab.value}" if lab.value >= 0 else f"case ({lab.value})"
    if isinstance(lab, A.Default):
        return "default"
    return lab.name


def _needs_braces(s: A.Stmt) -> bool:
    # an If as the then-branch of an if/else would capture the else
    while isinstance(s, (A.Labeled, A.IfElse, A.While, A.For, A.Switch)):
        s = s.s if not isinstance(s, A.IfElse) else s.s2
    return isinstance(s, A.If)


def _one(s: A.Stmt) -> A.Stmt:
    return A.Compound(s) if isinstance(s, A.Seq) else s


def format_stmt(s: A.Stmt, indent: int = 0) -> str:
    """C source for ``s``; sequences in single-statement slots get braces."""
    pad = "    " * indent
    if isinstance(s, A.Seq):
        return "\n".join(format_stmt(x, indent) for x in A.flatten(s))
    if isinstance(s, A.Compound):
        inner = "" if isinstance(s.s, A.Empty) else format_stmt(s.s, indent + 1) + "\n"
        return f"{pad}{{\n{inner}{pad}}}"
    if isinstance(s, A.ExprStmt):
        return f"{pad}{format_expr(s.e)};"
    if isinstance(s, (A.Empty, A.Other)):
        return f"{pad};"
    if isinstance(s, A.Return):
        return f"{pad}return;"
    if isinstance(s, A.ReturnExpr):
        return f"{pad}return {format_expr(s.e)};"
    if isinstance(s, A.Break):
        return f"{pad}break;"
    if isinstance(s, A.Continue):
        return f"{pad}continue;"
    if isinstance(s, A.Goto):
        return f"{pad}goto {s.label};"
    if isinstance(s, A.Labeled):
        return f"{pad}{_label_text(s.label)}:\n{format_stmt(_one(s.s), indent + 1)}"
    if isinstance(s, A.If):
        return f"{pad}if ({format_expr(s.e)})\n{format_stmt(_one(s.s1), indent + 1)}"
    if isinstance(s, A.IfElse):
        then = _one(s.s1)
        if _needs_braces(then):
            then = A.Compound(then)
        return (f"{pad}if ({format_expr(s.e)})\n{format_stmt(then, indent + 1)}\n"
                f"{pad}else\n{format_stmt(_one(s.s2), indent + 1)}")
    if isinstance(s, A.Switch):
        return f"{pad}switch ({format_expr(s.e)})\n{format_stmt(_one(s.s), indent + 1)}"
    if isinstance(s, A.While):
        return f"{pad}while ({format_expr(s.e)})\n{format_stmt(_one(s.s), indent + 1)}"
    if isinstance(s, A.DoWhile):
        body = s.s if isinstance(s.s, A.Compound) else A.Compound(s.s)
        return f"{pad}do\n{format_stmt(body, indent)}\n{pad}while ({format_expr(s.e)});"
    if isinstance(s, A.For):
        head = "; ".join(format_expr(x) for x in (s.e1, s.e2, s.e3))
        return f"{pad}for ({head})\n{format_stmt(_one(s.s), indent + 1)}"
    raise TypeError(f"not a statement: {s!r}")


def format_function(fb: A.FunctionBody) -> str:
    params = ", ".join(f"int {p}" for p in fb.params) or "void"
    body = "" if isinstance(fb.body, A.Empty) else format_stmt(fb.body, 1) + "\n"
    return f"void {fb.name}({params})\n{{\n{body}}}\n"
