"""Phase periodicity: striped, simply periodic, doubly periodic or aperiodic."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import PeriodicityInconsistencyError, TooFewValidSamplesError
from ..geometry import Rect
from .chromatic import as_expr, require_holomorphic

RATIO_TOL = 1e-8
STRIPE_TOL = 1e-8
ALPHA_TOL = 1e-8
MIN_SAMPLES = 32


@dataclass(frozen=True)
class NotPeriodic:
    reason: str = ""

    def __str__(self):
        return "not-periodic"


@dataclass(frozen=True)
class PhasePeriodic:
    alpha: float

    def __str__(self):
        return f"phase-periodic alpha={self.alpha:.12g}"


@dataclass(frozen=True)
class Striped:
    a: complex
    b: complex

    def __str__(self):
        return f"striped a={self.a:.12g} b={self.b:.12g}"


@dataclass(frozen=True)
class SimplyPeriodicPhase:
    p: complex
    alpha: float

    def __str__(self):
        return f"simply-periodic-phase p={self.p:.12g} alpha={self.alpha:.12g}"


@dataclass(frozen=True)
class DoublyPeriodic:
    p1: complex
    p2: complex
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __str__(self):
        return f"doubly-periodic p1={self.p1:.12g} p2={self.p2:.12g}"


@dataclass(frozen=True)
class Aperiodic:
    def __str__(self):
        return "aperiodic"


def probe_grid(rect: Rect, n: int) -> np.ndarray:
    x = rect.xmin + (np.arange(n) + 0.5) * rect.width / n
    y = rect.ymin + (np.arange(n) + 0.5) * rect.height / n
    return (x[None, :] + 1j * y[:, None]).ravel()


def _usable(*values):
    ok = np.ones(values[0].shape, dtype=bool)
    for v in values:
        ok &= np.isfinite(v) & (v != 0)
    return ok


def phase_period_test(f, p: complex, probe_rect: Rect):
    """Is f(z + p)/f(z) one positive constant e^alpha on a 16x16 grid?"""
    f = as_expr(f)
    p = complex(p)
    if p == 0:
        raise ValueError("period candidate must be nonzero")
    z = probe_grid(probe_rect, 16)
    a, b = np.asarray(f(z)), np.asarray(f(z + p))
    ok = _usable(a, b)
    if ok.sum() < MIN_SAMPLES:
        raise TooFewValidSamplesError(f"only {int(ok.sum())} usable probe points")
    h = b[ok] / a[ok]
    ref = np.median(h.real) + 1j * np.median(h.imag)
    scale = abs(ref)
    if not ref.real > 0 or abs(ref.imag) > RATIO_TOL * scale:
        return NotPeriodic("ratio is not a positive real")
    if np.max(np.abs(h - ref)) > RATIO_TOL * scale:
        return NotPeriodic("ratio is not constant")
    return PhasePeriodic(math.log(ref.real))


def is_striped(f, probe_rect: Rect) -> bool:
    """(log f)'' = (f f'' - f'^2)/f^2 vanishes at 64 probe points."""
    f = as_expr(f)
    require_holomorphic(f)
    d1 = f.derivative
    d2 = d1.derivative
    z = probe_grid(probe_rect, 8)
    a, b, c = np.asarray(f(z)), np.asarray(d1(z)), np.asarray(d2(z))
    ok = _usable(a) & np.isfinite(b) & np.isfinite(c)
    if ok.sum() < MIN_SAMPLES:
        raise TooFewValidSamplesError(f"only {int(ok.sum())} usable probe points")
    a, b, c = a[ok], b[ok], c[ok]
    resid = np.abs((a * c - b * b) / (a * a))
    return bool(np.all(resid <= STRIPE_TOL))


def _independent(p, q) -> bool:
    return abs((q / p).imag) > 1e-9 * abs(q / p)


def classify_periodicity(f, candidate_periods, probe_rect: Rect):
    f = as_expr(f)
    if is_striped(f, probe_rect):
        z0 = probe_rect.center
        a = complex(f.derivative(z0)) / complex(f(z0))
        b = np.log(complex(f(z0))) - a * z0
        return Striped(a, complex(b))
    passing = []
    for p in candidate_periods:
        r = phase_period_test(f, p, probe_rect)
        if isinstance(r, PhasePeriodic):
            passing.append((complex(p), r.alpha))
    for i, (p1, a1) in enumerate(passing):
        for p2, a2 in passing[i + 1:]:
            if _independent(p1, p2):
                if abs(a1) > ALPHA_TOL or abs(a2) > ALPHA_TOL:
                    raise PeriodicityInconsistencyError(
                        f"independent phase periods with nonzero alpha ({a1}, {a2})")
                return DoublyPeriodic(p1, p2, a1, a2)
    if passing:
        return SimplyPeriodicPhase(*passing[0])
    return Aperiodic()
