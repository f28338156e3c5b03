"""Complex-function expressions: parsing, evaluation, differentiation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import NonUnimodularError, ZeroOutsideDiskError
from .ast import (
    INFINITY,
    UNDEFINED,
    BinOp,
    Call,
    Const,
    ExtendedComplex,
    Neg,
    Node,
    Var,
    Z,
    const,
    format_complex,
    format_number,
    to_source,
)
from .derivative import derive
from .evaluator import INF, NAN, Program
from .parser import make_call, parse_node


@dataclass(frozen=True)
class Expr:
    """An immutable expression tree in ``z``.

    Calling an ``Expr`` evaluates it: arrays go through the vectorised backend,
    scalars through the pure-Python one; both return complex values with
    ``inf+0j`` for the point at infinity and ``nan+nanj`` for undefined.
    """

    root: Node

    @property
    def holomorphic(self) -> bool:
        return self.root.holomorphic

    @cached_property
    def program(self) -> Program:
        return Program([self.root])

    def __call__(self, z):
        if np.ndim(z) == 0:
            return self.program.run_scalar(complex(z))[0]
        return self.program.run_array(z)[0]

    def eval(self, z) -> ExtendedComplex:
        return ExtendedComplex.from_complex(self(complex(z)))

    @cached_property
    def derivative(self) -> "Expr":
        return Expr(derive(self.root))

    def __str__(self):
        return to_source(self.root)

    def __repr__(self):
        return f"Expr({to_source(self.root)!r})"


ExprAst = Expr


def parse(source: str) -> Expr:
    """Parse an expression; raises :class:`~phasor.errors.ParseError`."""
    return Expr(parse_node(source))


def differentiate(expr: Expr) -> Expr:
    return expr.derivative


def evaluate(expr: Expr, z) -> ExtendedComplex:
    return expr.eval(z)


def compile_together(*exprs: Expr) -> Program:
    """One program computing several expressions with shared subtrees."""
    return Program([e.root for e in exprs])


def blaschke(zeros, c=1.0) -> Expr:
    """Finite Blaschke product ``c * prod(((z - a)/(1 - conj(a) z))**mult)``.

    ``zeros`` is a sequence of ``(a, multiplicity)`` pairs (a bare complex
    counts as multiplicity 1).
    """
    c = complex(c)
    if abs(abs(c) - 1.0) > 1e-12:
        raise NonUnimodularError(f"|c| = {abs(c)!r} is not 1")
    product = None
    for item in zeros:
        a, mult = (item, 1) if np.ndim(item) == 0 and not isinstance(item, tuple) else item
        a, mult = complex(a), int(mult)
        if abs(a) >= 1.0:
            raise ZeroOutsideDiskError(f"zero {a!r} is not inside the unit disk")
        if mult < 1:
            raise ValueError(f"multiplicity must be positive, got {mult}")
        if a == 0:
            factor = Z
        else:
            denom = BinOp("-", Const(1.0), BinOp("*", const(a.conjugate()), Z))
            factor = BinOp("/", BinOp("-", Z, const(a)), denom)
        if mult > 1:
            factor = BinOp("^", factor, Const(float(mult)))
        product = factor if product is None else BinOp("*", product, factor)
    if product is None:
        product = Const(1.0)
    if c != 1:
        product = BinOp("*", const(c), product)
    return Expr(product)


__all__ = [
    "Expr",
    "ExprAst",
    "ExtendedComplex",
    "INFINITY",
    "UNDEFINED",
    "INF",
    "NAN",
    "Node",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Z",
    "const",
    "parse",
    "differentiate",
    "evaluate",
    "blaschke",
    "compile_together",
    "make_call",
    "to_source",
    "format_number",
    "format_complex",
]
