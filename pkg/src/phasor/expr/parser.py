"""Recursive-descent parser for complex-function expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | 'i' | 'z' | ident '(' expr (',' expr)* ')' | '(' expr ')'

Error offsets are 1-based byte columns; end of input is reported as
``len(source) + 1``.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from ..errors import ArityError, ParseError, UnknownIdentifierError
from .ast import BUILTINS, DEFAULT_SHELLS, I, INTEGER_PARAMS, Z, BinOp, Call, Const, Neg, Node, const

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int  # 1-based


def tokenize(source: str) -> list[Token]:
    data = source.encode("utf-8")
    text = data.decode("utf-8")
    # byte offsets: map character index to byte column
    byte_col = [len(text[:k].encode("utf-8")) + 1 for k in range(len(text) + 1)]
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte_col[pos])
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), byte_col[pos]))
        pos = m.end()
    tokens.append(Token("eof", "", byte_col[len(text)]))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            what = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise ParseError(f"expected {text!r}, found {what}", self.tok.offset)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.factor())
        base = self.base()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def base(self) -> Node:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Const(float(t.text))
        if t.kind == "ident":
            self.advance()
            if t.text == "z":
                return Z
            if t.text == "i":
                return I
            if t.text not in BUILTINS:
                raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.offset)
            return self.call(t)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset)

    def call(self, name_tok: Token) -> Node:
        self.expect("(")
        args = [(self.tok.offset, self.expr())]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append((self.tok.offset, self.expr()))
        self.expect(")")
        return make_call(name_tok.text, args, name_tok.offset)


def make_call(name: str, args, offset: int = 0) -> Node:
    """Build a call node from ``[(offset, node), ...]``, checking arity."""
    n_expr, param_names, optional = BUILTINS[name]
    n_max = n_expr + len(param_names)
    n_min = n_max - optional
    if not n_min <= len(args) <= n_max:
        want = str(n_min) if n_min == n_max else f"{n_min}..{n_max}"
        raise ArityError(f"{name} takes {want} arguments, got {len(args)}", offset)
    exprs = tuple(node for _, node in args[:n_expr])
    params = []
    for pname, (poff, node) in zip(param_names, args[n_expr:]):
        params.append(_constant_param(name, pname, node, poff))
    if name == "wp" and len(params) == 2:
        params.append(DEFAULT_SHELLS)
    if name in ("wp", "wp_d"):
        from ..special import LatticeSpec

        try:
            LatticeSpec(*params[:3])
        except ValueError as exc:
            raise ParseError(f"invalid lattice for {name}: {exc}", offset) from None
    if name == "conj" and not exprs[0].depends_on_z:
        # conj of a constant folds to a constant; nothing else is simplified
        from .evaluator import evaluate_scalar

        return const(evaluate_scalar(exprs[0], 0j).conjugate())
    return Call(name, exprs, tuple(params))


def _constant_param(fname, pname, node, offset):
    from .evaluator import evaluate_scalar

    if node.depends_on_z:
        raise ParseError(f"parameter {pname!r} of {fname} must not depend on z", offset)
    value = evaluate_scalar(node, 0j)
    if pname in INTEGER_PARAMS:
        if value.imag != 0 or not float(value.real).is_integer() or value.real < 0:
            raise ParseError(f"parameter {pname!r} of {fname} must be a nonnegative integer", offset)
        return int(value.real)
    return value


def parse(source: str):
    """Parse ``source`` into an :class:`~phasor.expr.Expr`."""
    from . import Expr

    return Expr(_Parser(source).parse())


def parse_node(source: str) -> Node:
    return _Parser(source).parse()
