"""Evaluation with extended-complex semantics.

Values travel as complex128 with two sentinels: ``INF = inf+0j`` (the point at
infinity) and ``NAN = nan+nanj`` (undefined). Every operation re-canonicalises
its output so these are the only non-finite values ever seen downstream.

Trees are flattened into a :class:`Program` whose instructions are shared by
node identity, so evaluating ``f`` together with ``differentiate(f)`` only
computes the common subtrees once.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .. import special
from .ast import BinOp, Call, Const, Neg, Node, Var

INF = complex(math.inf, 0.0)
NAN = complex(math.nan, math.nan)

_MAX_INT_POWER = 4096


class Program:
    """Straight-line code for one or more expression trees."""

    def __init__(self, roots):
        self.instrs = []
        self._index = {}
        self._keep = []
        self.outputs = [self._visit(r) for r in roots]

    def _visit(self, node: Node) -> int:
        key = id(node)
        if key in self._index:
            return self._index[key]
        if isinstance(node, Const):
            instr = ("const", node.value, ())
        elif isinstance(node, Var):
            instr = ("z", None, ())
        elif isinstance(node, Neg):
            instr = ("neg", None, (self._visit(node.arg),))
        elif isinstance(node, BinOp):
            n = _integer_exponent(node) if node.op == "^" else None
            if n is not None:
                instr = ("powi", n, (self._visit(node.left),))
            else:
                instr = (node.op, None, (self._visit(node.left), self._visit(node.right)))
        elif isinstance(node, Call):
            instr = (node.name, node.params, tuple(self._visit(a) for a in node.args))
        else:
            raise TypeError(f"not an expression node: {node!r}")
        self._keep.append(node)
        self._index[key] = len(self.instrs)
        self.instrs.append(instr)
        return self._index[key]

    # -- array backend -----------------------------------------------------

    def run_array(self, z) -> list:
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        vals = []
        with np.errstate(all="ignore"):
            for op, payload, args in self.instrs:
                if op == "const":
                    c = complex(payload)
                    vals.append((np.full(shape, c), math.isfinite(c.real) and math.isfinite(c.imag)))
                elif op == "z":
                    vals.append(_canon_input(z))
                else:
                    vals.append(_ARRAY_OPS[op](payload, *(vals[i] for i in args)))
        return [vals[i][0] for i in self.outputs]

    # -- scalar backend ----------------------------------------------------

    def run_scalar(self, z: complex) -> list:
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            z = NAN if math.isnan(z.real) or math.isnan(z.imag) else INF
        vals = []
        for op, payload, args in self.instrs:
            if op == "const":
                vals.append(payload)
            elif op == "z":
                vals.append(z)
            else:
                vals.append(_SCALAR_OPS[op](payload, *(vals[i] for i in args)))
        return [vals[i] for i in self.outputs]


def _integer_exponent(node: BinOp):
    if node.right.depends_on_z:
        return None
    c = evaluate_scalar(node.right, 0j)
    if c.imag == 0.0 and math.isfinite(c.real) and c.real.is_integer() and abs(c.real) <= _MAX_INT_POWER:
        return int(c.real)
    return None


def evaluate_scalar(node: Node, z: complex) -> complex:
    return Program([node]).run_scalar(z)[0]


# =============================================================================
# array operations: each takes (payload, (value, clean), ...) -> (value, clean)
# "clean" means every entry is finite, which lets the common case skip masking.
# =============================================================================

def _nan(a):
    return np.isnan(a.real)


def _inf(a):
    return np.isinf(a.real)


def _canon(r, undef):
    r = np.array(r, dtype=complex, copy=True)
    r[~np.isfinite(r)] = INF
    r[undef] = NAN
    return r, bool(np.isfinite(r).all())


def _canon_input(z):
    if np.isfinite(z).all():
        return z, True
    nan = np.isnan(z.real) | np.isnan(z.imag)
    return _canon(z, nan)


def _finished(r, clean_in):
    return clean_in and np.isfinite(r).all()


def a_neg(_, a):
    v, c = a
    if c:
        return -v, True
    return _canon(-v, _nan(v))


def a_add(_, a, b):
    (x, cx), (y, cy) = a, b
    r = x + y
    if _finished(r, cx and cy):
        return r, True
    return _canon(r, _nan(x) | _nan(y) | (_inf(x) & _inf(y)))


def a_sub(_, a, b):
    (x, cx), (y, cy) = a, b
    r = x - y
    if _finished(r, cx and cy):
        return r, True
    return _canon(r, _nan(x) | _nan(y) | (_inf(x) & _inf(y)))


def a_mul(_, a, b):
    (x, cx), (y, cy) = a, b
    r = x * y
    if _finished(r, cx and cy):
        return r, True
    undef = _nan(x) | _nan(y) | (_inf(x) & (y == 0)) | (_inf(y) & (x == 0))
    return _canon(r, undef)


def a_div(_, a, b):
    (x, cx), (y, cy) = a, b
    r = x / y
    if _finished(r, cx and cy):
        return r, True
    undef = _nan(x) | _nan(y) | ((x == 0) & (y == 0)) | (_inf(x) & _inf(y))
    r = np.where(_inf(y) & ~_inf(x), 0j, r)
    r = np.where((y == 0) & (x != 0), INF, r)
    return _canon(r, undef)


def a_powi(n, a):
    if n == 0:
        x, _ = a
        r = np.ones_like(x)
        r[_nan(x)] = NAN
        return r, bool(np.isfinite(r).all())
    result = None
    base = a
    k = abs(n)
    while k:
        if k & 1:
            result = base if result is None else a_mul(None, result, base)
        k >>= 1
        if k:
            base = a_mul(None, base, base)
    if n < 0:
        one = (np.ones_like(result[0]), True)
        result = a_div(None, one, result)
    return result


def a_pow(_, a, b):
    (x, cx), (y, cy) = a, b
    r = np.exp(y * np.log(x + 0j))
    if _finished(r, cx and cy) and not (x == 0).any():
        return r, True
    r = np.array(r, copy=True)
    undef = _nan(x) | _nan(y) | _inf(y)
    zero, inf = (x == 0), _inf(x)
    pos, neg = y.real > 0, y.real < 0
    ylim = y == 0
    r[(zero & pos) | (inf & neg)] = 0
    r[(zero & neg) | (inf & pos)] = INF
    undef |= (zero | inf) & ~pos & ~neg & ~ylim
    r[ylim] = 1
    return _canon(r, undef)


def _a_func(f):
    def op(_, a):
        x, c = a
        r = f(x)
        if _finished(r, c):
            return r, True
        return _canon(r, _nan(x) | _inf(x))

    return op


def a_log(_, a):
    x, c = a
    r = np.log(x + 0j)
    if _finished(r, c):
        return r, True
    return _canon(r, _nan(x))


def a_sqrt(_, a):
    x, c = a
    r = np.sqrt(x + 0j)
    if _finished(r, c):
        return r, True
    return _canon(r, _nan(x))


def a_conj(_, a):
    x, c = a
    r = np.conj(x)
    if c:
        return r, True
    return _canon(r, _nan(x))


def a_re(_, a):
    x, c = a
    r = x.real + 0j
    if c:
        return r, True
    return _canon(r, _nan(x) | _inf(x))


def a_im(_, a):
    x, c = a
    r = x.imag + 0j
    if c:
        return r, True
    return _canon(r, _nan(x) | _inf(x))


def a_abs(_, a):
    x, c = a
    r = np.abs(x) + 0j
    if _finished(r, c):
        return r, True
    return _canon(r, _nan(x))


def _a_special(fn):
    def op(params, a):
        x, _ = a
        r = fn(x, *params)
        return r, bool(np.isfinite(r).all())

    return op


_ARRAY_OPS = {
    "neg": a_neg,
    "+": a_add,
    "-": a_sub,
    "*": a_mul,
    "/": a_div,
    "^": a_pow,
    "powi": a_powi,
    "exp": _a_func(np.exp),
    "log": a_log,
    "sqrt": a_sqrt,
    "sin": _a_func(np.sin),
    "cos": _a_func(np.cos),
    "tan": _a_func(np.tan),
    "sinh": _a_func(np.sinh),
    "cosh": _a_func(np.cosh),
    "conj": a_conj,
    "re": a_re,
    "im": a_im,
    "abs": a_abs,
    "gamma": _a_special(lambda x: special.gamma(x)),
    "zeta": _a_special(lambda x: special.zeta(x)),
    "wp": _a_special(lambda x, w1, w2, n: special.wp(x, special.LatticeSpec(w1, w2, n))),
    "psi": _a_special(lambda x, k: special.polygamma(k, x)),
    "zeta_d": _a_special(lambda x, k: special.zeta_derivative(x, k)),
    "wp_d": _a_special(lambda x, w1, w2, n, k: special.wp(x, special.LatticeSpec(w1, w2, n), order=k)),
}


# =============================================================================
# scalar operations on Python complex, mirroring the array rules
# =============================================================================

def _s_finite(c):
    return math.isfinite(c.real) and math.isfinite(c.imag)


def _s_nan(c):
    return math.isnan(c.real)


def _s_inf(c):
    return math.isinf(c.real)


def _s_canon(r):
    if _s_finite(r):
        return r
    if math.isnan(r.real) and math.isnan(r.imag):
        return NAN
    return INF


def s_neg(_, x):
    return x if (_s_nan(x) or _s_inf(x)) else -x


def s_add(_, x, y):
    r = x + y
    if _s_finite(r):
        return r
    if _s_nan(x) or _s_nan(y) or (_s_inf(x) and _s_inf(y)):
        return NAN
    return INF


def s_sub(_, x, y):
    r = x - y
    if _s_finite(r):
        return r
    if _s_nan(x) or _s_nan(y) or (_s_inf(x) and _s_inf(y)):
        return NAN
    return INF


def s_mul(_, x, y):
    if _s_nan(x) or _s_nan(y):
        return NAN
    if _s_inf(x) or _s_inf(y):
        if x == 0 or y == 0:
            return NAN
        return INF
    r = x * y
    return r if _s_finite(r) else INF


def s_div(_, x, y):
    if _s_nan(x) or _s_nan(y):
        return NAN
    if y == 0:
        return NAN if x == 0 else INF
    if _s_inf(y):
        return NAN if _s_inf(x) else 0j
    if _s_inf(x):
        return INF
    try:
        r = x / y
    except OverflowError:
        return INF
    return r if _s_finite(r) else INF


def s_powi(n, x):
    if n == 0:
        return NAN if _s_nan(x) else 1 + 0j
    result = None
    base = x
    k = abs(n)
    while k:
        if k & 1:
            result = base if result is None else s_mul(None, result, base)
        k >>= 1
        if k:
            base = s_mul(None, base, base)
    if n < 0:
        result = s_div(None, 1 + 0j, result)
    return result


def s_pow(_, x, y):
    if _s_nan(x) or _s_nan(y) or _s_inf(y):
        return NAN
    if y == 0:
        return 1 + 0j
    if x == 0 or _s_inf(x):
        if y.real > 0:
            return 0j if x == 0 else INF
        if y.real < 0:
            return INF if x == 0 else 0j
        return NAN
    try:
        r = cmath.exp(y * cmath.log(x + 0j))
    except OverflowError:
        return INF
    return _s_canon(r)


def _s_func(f, undefined_at_inf=True):
    def op(_, x):
        if _s_nan(x):
            return NAN
        if _s_inf(x):
            return NAN if undefined_at_inf else INF
        try:
            r = f(x)
        except OverflowError:
            return INF
        return _s_canon(r)

    return op


def s_log(_, x):
    if _s_nan(x):
        return NAN
    if _s_inf(x) or x == 0:
        return INF
    return cmath.log(x + 0j)


def s_conj(_, x):
    if _s_nan(x) or _s_inf(x):
        return x
    return x.conjugate()


def s_re(_, x):
    if _s_nan(x) or _s_inf(x):
        return NAN
    return complex(x.real)


def s_im(_, x):
    if _s_nan(x) or _s_inf(x):
        return NAN
    return complex(x.imag)


def s_abs(_, x):
    if _s_nan(x):
        return NAN
    if _s_inf(x):
        return INF
    return _s_canon(complex(abs(x)))


def _s_special(name):
    array_op = _ARRAY_OPS[name]

    def op(params, x):
        r, _ = array_op(params, (np.array([x]), _s_finite(x)))
        return complex(r[0])

    return op


_SCALAR_OPS = {
    "neg": s_neg,
    "+": s_add,
    "-": s_sub,
    "*": s_mul,
    "/": s_div,
    "^": s_pow,
    "powi": s_powi,
    "exp": _s_func(cmath.exp),
    "log": s_log,
    "sqrt": _s_func(lambda x: cmath.sqrt(x + 0j), undefined_at_inf=False),
    "sin": _s_func(cmath.sin),
    "cos": _s_func(cmath.cos),
    "tan": _s_func(cmath.tan),
    "sinh": _s_func(cmath.sinh),
    "cosh": _s_func(cmath.cosh),
    "conj": s_conj,
    "re": s_re,
    "im": s_im,
    "abs": s_abs,
}
for _name in ("gamma", "zeta", "wp", "psi", "zeta_d", "wp_d"):
    _SCALAR_OPS[_name] = _s_special(_name)
