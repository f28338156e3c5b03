"""Expression tree nodes, the extended-complex value type and the printer."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

NON_HOLOMORPHIC = frozenset({"conj", "re", "im", "abs"})

# name -> (number of expression arguments, names of constant parameters,
#          number of those parameters that may be omitted)
BUILTINS = {
    "exp": (1, (), 0),
    "log": (1, (), 0),
    "sqrt": (1, (), 0),
    "sin": (1, (), 0),
    "cos": (1, (), 0),
    "tan": (1, (), 0),
    "sinh": (1, (), 0),
    "cosh": (1, (), 0),
    "gamma": (1, (), 0),
    "zeta": (1, (), 0),
    "wp": (1, ("omega1", "omega2", "shells"), 1),
    "conj": (1, (), 0),
    "re": (1, (), 0),
    "im": (1, (), 0),
    "abs": (1, (), 0),
    # derivative nodes emitted by differentiate(); parseable so printing round-trips
    "psi": (1, ("order",), 0),
    "zeta_d": (1, ("order",), 0),
    "wp_d": (1, ("omega1", "omega2", "shells", "order"), 0),
}

INTEGER_PARAMS = frozenset({"shells", "order"})
DEFAULT_SHELLS = 40


class Node:
    """Base class of all expression nodes. Nodes are immutable."""

    __slots__ = ()

    @cached_property
    def holomorphic(self) -> bool:
        return all(child.holomorphic for child in self.children())

    @cached_property
    def depends_on_z(self) -> bool:
        return any(child.depends_on_z for child in self.children())

    def children(self):
        return ()

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True, eq=True)
class Const(Node):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, eq=True)
class Var(Node):
    @cached_property
    def depends_on_z(self) -> bool:
        return True


@dataclass(frozen=True, eq=True)
class Neg(Node):
    arg: Node

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class BinOp(Node):
    op: str  # one of + - * / ^
    left: Node
    right: Node

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Call(Node):
    name: str
    args: tuple
    params: tuple = ()

    def children(self):
        return self.args

    @cached_property
    def holomorphic(self) -> bool:
        if self.name in NON_HOLOMORPHIC:
            return False
        return all(a.holomorphic for a in self.args)


Z = Var()
I = Const(1j)


def const(value) -> Node:
    """Canonical tree for a complex constant.

    Only nonnegative reals and ``i`` are stored as literals; everything else is
    spelled the way the parser would produce it (``-(2*i)``, ``0.5+(0.25*i)``),
    which keeps ``parse(to_source(t)) == t`` for every tree built here.
    """
    c = complex(value)
    re_, im_ = c.real, c.imag
    if im_ == 0.0:
        return _real(re_)
    if re_ == 0.0:
        return _imag(im_)
    im_node = _imag(abs(im_))
    return BinOp("-" if im_ < 0 else "+", _real(re_), im_node)


def _real(x: float) -> Node:
    if math.copysign(1.0, x) < 0 and x != 0.0:
        return Neg(Const(-x))
    return Const(abs(x))


def _imag(y: float) -> Node:
    if y == 1.0:
        return I
    if y == -1.0:
        return Neg(I)
    node = BinOp("*", Const(abs(y)), I)
    return Neg(node) if y < 0 else node


@dataclass(frozen=True)
class ExtendedComplex:
    """A value of the Riemann sphere plus an explicit 'undefined' state."""

    kind: str  # "finite" | "infinity" | "undefined"
    value: complex = 0j

    @classmethod
    def from_complex(cls, w) -> "ExtendedComplex":
        w = complex(w)
        if cmath.isnan(w) and not cmath.isinf(w):
            return UNDEFINED
        if cmath.isinf(w) or cmath.isnan(w):
            return INFINITY
        return cls("finite", w)

    def to_complex(self) -> complex:
        """Sentinel encoding used by the vectorised code: inf+0j and nan+nanj."""
        if self.kind == "finite":
            return self.value
        if self.kind == "infinity":
            return complex(math.inf, 0.0)
        return complex(math.nan, math.nan)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    @property
    def is_undefined(self) -> bool:
        return self.kind == "undefined"

    def __complex__(self):
        return self.to_complex()

    def __abs__(self):
        return abs(self.to_complex())

    def __str__(self):
        if self.kind == "finite":
            return format_complex(self.value)
        return self.kind


INFINITY = ExtendedComplex("infinity")
UNDEFINED = ExtendedComplex("undefined")


def format_number(x: float, digits: int = 12) -> str:
    return format(x, f".{digits}g")


def format_complex(w: complex, digits: int = 12) -> str:
    return f"{format_number(w.real, digits)} {format_number(w.imag, digits)}"


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _literal(x: float) -> str:
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _const_source(c: complex) -> str:
    if c == 1j:
        return "i"
    if c.imag == 0.0 and c.real >= 0.0:
        return _literal(c.real)
    # only reachable for hand-built Const nodes; not parse-stable as a single literal
    return "(" + to_source(const(c)) + ")"


def _param_source(name: str, value) -> str:
    if name in INTEGER_PARAMS:
        return str(int(value))
    return to_source(const(value))


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return 4 if node.op == "^" else _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def to_source(node: Node) -> str:
    """Render a tree in the input grammar with the minimum of parentheses."""
    if isinstance(node, Const):
        return _const_source(node.value)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        inner = to_source(node.arg)
        if _prec(node.arg) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(node, BinOp):
        left, right = to_source(node.left), to_source(node.right)
        if node.op == "^":
            if _prec(node.left) < 5 or (isinstance(node.left, Const) and not _atomic_const(node.left)):
                left = f"({left})"
            if _prec(node.right) < 3:
                right = f"({right})"
            return f"{left}^{right}"
        p = _PREC[node.op]
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left}{node.op}{right}"
    if isinstance(node, Call):
        parts = [to_source(a) for a in node.args]
        names = BUILTINS[node.name][1]
        parts += [_param_source(n, v) for n, v in zip(names, node.params)]
        return f"{node.name}({', '.join(parts)})"
    raise TypeError(f"not an expression node: {node!r}")


def _atomic_const(node: Const) -> bool:
    c = node.value
    return c == 1j or (c.imag == 0.0 and c.real >= 0.0)
