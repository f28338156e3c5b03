"""Symbolic differentiation.

The only rewriting done here is dropping identically-zero terms and factors of
the literal derivative ``1``; everything else is the textbook rule applied
verbatim, so the output shape is predictable.
"""

from __future__ import annotations

import math

from ..errors import NonHolomorphicError
from .ast import BinOp, Call, Const, Neg, Node, Var, const

ONE = Const(1.0)
TWO = Const(2.0)


def _is_one(node):
    return isinstance(node, Const) and node.value == 1


def _mul(a: Node, b: Node) -> Node:
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp("*", a, b)


def _chain(outer: Node, du: Node) -> Node:
    return _mul(outer, du)


def derive(node: Node) -> Node:
    if not node.holomorphic:
        raise NonHolomorphicError(
            "cannot differentiate an expression containing conj/re/im/abs")
    d = _d(node)
    return Const(0.0) if d is None else d


def _d(node: Node):
    """Derivative of ``node``, or None when it is identically zero."""
    if not node.depends_on_z:
        return None
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        du = _d(node.arg)
        return None if du is None else Neg(du)
    if isinstance(node, BinOp):
        return _d_binop(node)
    if isinstance(node, Call):
        return _d_call(node)
    raise TypeError(f"cannot differentiate {node!r}")


def _d_binop(node: BinOp):
    u, v, op = node.left, node.right, node.op
    du, dv = _d(u), _d(v)
    if op in "+-":
        if dv is None:
            return du
        if du is None:
            return dv if op == "+" else Neg(dv)
        return BinOp(op, du, dv)
    if op == "*":
        if dv is None:
            return _mul(du, v) if not _is_one(du) else v
        if du is None:
            return _mul(u, dv)
        return BinOp("+", _mul(du, v), _mul(u, dv))
    if op == "/":
        if dv is None:
            return BinOp("/", du, v)
        v2 = BinOp("^", v, TWO)
        if du is None:
            return Neg(BinOp("/", _mul(u, dv), v2))
        return BinOp("/", BinOp("-", _mul(du, v), _mul(u, dv)), v2)
    if op == "^":
        if dv is None:
            # constant exponent: power rule
            from .evaluator import evaluate_scalar

            n = evaluate_scalar(v, 0j)
            if n.imag == 0 and math.isfinite(n.real):
                lowered = const(n.real - 1.0)
            else:
                lowered = BinOp("-", v, ONE)
            power = u if _is_one(lowered) else BinOp("^", u, lowered)
            return _chain(BinOp("*", v, power), du)
        # u^v * (v' log u + v u'/u)
        term = _mul(dv, Call("log", (u,)))
        if du is not None:
            term = BinOp("+", term, BinOp("/", _mul(v, du), u))
        return BinOp("*", node, term)
    raise ValueError(op)


def _d_call(node: Call):
    (u,) = node.args
    du = _d(u)
    name, params = node.name, node.params
    if name == "exp":
        return _chain(node, du)
    if name == "log":
        return BinOp("/", du, u)
    if name == "sqrt":
        return BinOp("/", du, BinOp("*", TWO, node))
    if name == "sin":
        return _chain(Call("cos", (u,)), du)
    if name == "cos":
        return _chain(Neg(Call("sin", (u,))), du)
    if name == "tan":
        return BinOp("/", du, BinOp("^", Call("cos", (u,)), TWO))
    if name == "sinh":
        return _chain(Call("cosh", (u,)), du)
    if name == "cosh":
        return _chain(Call("sinh", (u,)), du)
    if name == "gamma":
        return _chain(BinOp("*", node, Call("psi", (u,), (0,))), du)
    if name == "psi":
        return _chain(Call("psi", (u,), (params[0] + 1,)), du)
    if name == "zeta":
        return _chain(Call("zeta_d", (u,), (1,)), du)
    if name == "zeta_d":
        return _chain(Call("zeta_d", (u,), (params[0] + 1,)), du)
    if name == "wp":
        return _chain(Call("wp_d", (u,), tuple(params) + (1,)), du)
    if name == "wp_d":
        return _chain(Call("wp_d", (u,), tuple(params[:3]) + (params[3] + 1,)), du)
    raise NonHolomorphicError(f"{name} is not holomorphic")
