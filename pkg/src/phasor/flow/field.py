"""The phase flow z' = f conj(f') / (|f|^2 + |f'|^2) and Blaschke products."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..analysis.chromatic import as_expr, require_holomorphic
from ..errors import NonUnimodularError, ZeroOutsideDiskError
from ..expr import blaschke, compile_together


def _field_from_r(r):
    """conj(r)/(1 + |r|^2) with r = f'/f; the same as the phase flow, rescaled."""
    r = np.asarray(r, dtype=complex)
    with np.errstate(all="ignore"):
        a = np.abs(r)
        g = np.where(a > 1e150, 1.0 / r, np.conj(r) / (1.0 + a * a))
    return np.where(np.isfinite(r), g, 0.0)


def _scalar_field(r: complex) -> complex:
    if not cmath.isfinite(r):
        return 0j
    a = abs(r)
    if a > 1e150:
        return 1 / r
    return r.conjugate() / (1.0 + a * a)


@dataclass(frozen=True)
class BlaschkeProduct:
    """c * prod ((z - a)/(1 - conj(a) z))^beta with closed-form log-derivative."""

    zeros: tuple  # ((a, beta), ...) with distinct a
    c: complex = 1.0

    def __post_init__(self):
        c = complex(self.c)
        if abs(abs(c) - 1) > 1e-12:
            raise NonUnimodularError(f"|c| = {abs(c)!r} is not 1")
        merged = {}
        order = []
        for item in self.zeros:
            a, beta = (item, 1) if np.ndim(item) == 0 and not isinstance(item, tuple) else item
            a, beta = complex(a), int(beta)
            if abs(a) >= 1:
                raise ZeroOutsideDiskError(f"zero {a!r} is not inside the unit disk")
            if beta < 1:
                raise ValueError("multiplicities must be positive")
            if a not in merged:
                order.append(a)
                merged[a] = 0
            merged[a] += beta
        object.__setattr__(self, "zeros", tuple((a, merged[a]) for a in order))
        object.__setattr__(self, "c", c)

    @property
    def degree(self) -> int:
        return sum(b for _, b in self.zeros)

    @property
    def expr(self):
        return blaschke(self.zeros, self.c)

    @property
    def holomorphic(self):
        return True

    def __call__(self, z):
        z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
        out = self.c
        for a, beta in self.zeros:
            out = out * ((z - a) / (1 - a.conjugate() * z)) ** beta
        return out

    def logderiv(self, z):
        """f'/f = sum beta (1 - |a|^2) / ((z - a)(1 - conj(a) z))."""
        if np.ndim(z) == 0:
            try:
                return sum(beta * (1 - abs(a) ** 2) / ((complex(z) - a) * (1 - a.conjugate() * z))
                           for a, beta in self.zeros)
            except ZeroDivisionError:
                return complex(math.inf, 0)
        z = np.asarray(z, dtype=complex)
        out = 0
        with np.errstate(all="ignore"):
            for a, beta in self.zeros:
                out = out + beta * (1 - abs(a) ** 2) / ((z - a) * (1 - a.conjugate() * z))
        return out


class PhaseFlow:
    """Vector field of the phase flow for an expression or a Blaschke product."""

    def __init__(self, f):
        if isinstance(f, PhaseFlow):
            f = f.source
        self.source = f
        if isinstance(f, BlaschkeProduct):
            self.blaschke = f
            self.expr = f.expr
            self._prog = None
        else:
            f = as_expr(f)
            require_holomorphic(f)
            self.blaschke = None
            self.expr = f
            self._prog = compile_together(f, f.derivative)
            self.source = f

    # value and log-derivative ------------------------------------------------
    def values(self, z):
        """(f, f') on an array."""
        if self.blaschke is not None:
            fz = self.blaschke(z)
            return fz, fz * self.blaschke.logderiv(z)
        fz, dfz = self._prog.run_array(np.asarray(z, dtype=complex))
        return fz, dfz

    def logderiv(self, z):
        if self.blaschke is not None:
            return self.blaschke.logderiv(z)
        fz, dfz = self.values(z)
        with np.errstate(all="ignore"):
            r = dfz / fz
        good = np.isfinite(fz) & np.isfinite(dfz) & (fz != 0)
        # zeros of f and poles of f are both fixed points: mark r infinite there
        return np.where(good, r, np.inf)

    def logderiv_scalar(self, z: complex) -> complex:
        if self.blaschke is not None:
            return self.blaschke.logderiv(z)
        fz, dfz = self._prog.run_scalar(z)
        if fz == 0 or not (cmath.isfinite(fz) and cmath.isfinite(dfz)):
            return complex(math.inf, 0)
        return dfz / fz

    def f(self, z):
        if self.blaschke is not None:
            return self.blaschke(z)
        return self.expr(z)

    def phase(self, z):
        w = self.f(z)
        return w / abs(w) if np.ndim(w) == 0 else w / np.abs(w)

    # field -------------------------------------------------------------------------
    def __call__(self, z):
        if np.ndim(z) == 0:
            return _scalar_field(self.logderiv_scalar(complex(z)))
        return _field_from_r(self.logderiv(z))


def flow_field(f, z):
    """g(z) of the phase flow; 0 at zeros, poles and points where f is undefined."""
    return PhaseFlow(f)(z)
