"""Partial sums of power series as expressions."""

from __future__ import annotations

from ..expr import Expr
from ..expr.ast import BinOp, Const, Z, const


def _monomial(c: complex, k: int):
    if k == 0:
        return const(c)
    power = Z if k == 1 else BinOp("^", Z, Const(float(k)))
    if c == 1:
        return power
    return BinOp("*", const(c), power)


def partial_sum(series, n: int) -> Expr:
    """Degree-n Taylor polynomial: ``"geometric"`` (1/(1-z)) or a coefficient list."""
    n = int(n)
    if n < 1:
        raise ValueError("degree must be at least 1")
    if isinstance(series, str):
        if series != "geometric":
            raise ValueError(f"unknown series {series!r}")
        coeffs = [1.0] * (n + 1)
    else:
        coeffs = [complex(c) for c in series]
        if len(coeffs) < n + 1:
            raise ValueError(f"need {n + 1} coefficients for degree {n}")
        coeffs = coeffs[: n + 1]
    node = None
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        term = _monomial(c, k)
        node = term if node is None else BinOp("+", node, term)
    return Expr(node if node is not None else Const(0.0))
