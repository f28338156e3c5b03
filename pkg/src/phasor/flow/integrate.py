"""Orbits of the phase flow: adaptive RK4, fixed points and unstable manifolds."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..analysis.localize import Entry, SingularityReport, find_saddles, localize_singularities
from ..errors import SeedClassificationError, StagnationError
from ..geometry import Disk, Rect
from .field import PhaseFlow

TOL = 1e-9
H_MIN = 1e-6
H_MAX = 0.05
FIXED_RADIUS = 1e-6
MAX_STEPS = 10**6
REPROJECT_EVERY = 100
SEED_RADIUS = 1e-4
CAUCHY_RADIUS = 1e-3


@dataclass(frozen=True)
class FixedPoint:
    location: complex
    kind: str  # zero | pole | saddle
    index: int  # position among the fixed points of the same kind
    order: int = 1


@dataclass
class Orbit:
    points: np.ndarray
    termination: str  # reached-zero | reached-pole | reached-saddle | exited-domain | step-limit
    index: int | None = None  # which zero/pole/saddle was reached

    @property
    def end(self) -> complex:
        return complex(self.points[-1])

    def __len__(self):
        return len(self.points)


def classify_fixed_points(f, rect: Rect, min_box: float = 1e-3) -> SingularityReport:
    """Zeros (repelling), poles (attracting) and saddles of the phase flow in rect."""
    expr = PhaseFlow(f).expr
    zp = localize_singularities(expr, rect, min_box)
    sd = find_saddles(expr, rect, min_box)
    entries = sorted(zp.entries + sd.entries, key=lambda e: (e.location.real, e.location.imag))
    return SingularityReport(tuple(entries), zp.mixed_boxes + sd.mixed_boxes)


def fixed_points_from(report_or_list):
    """Normalise a report (or (location, kind[, order]) tuples) to FixedPoint records."""
    items = report_or_list.entries if isinstance(report_or_list, SingularityReport) else report_or_list
    counters = {}
    out = []
    for e in items:
        if isinstance(e, Entry):
            loc, kind, order = e.location, e.kind, e.order
        elif isinstance(e, FixedPoint):
            loc, kind, order = e.location, e.kind, e.order
        else:
            loc, kind = e[0], e[1]
            order = e[2] if len(e) > 2 else 1
        idx = counters.get(kind, 0)
        counters[kind] = idx + 1
        out.append(FixedPoint(complex(loc), kind, idx, order))
    return out


def _bounding_rect(domain) -> Rect:
    if isinstance(domain, Disk):
        return Rect.square(domain.center, 2 * domain.radius)
    return domain


def _unit_field(flow, z):
    g = flow(z)
    a = abs(g)
    return g / a if a > 0 else 0j


def _rk4(flow, z, h, sgn):
    # the orbit is traced by arc length: g/|g| has the same orbits as g but does
    # not crawl near degenerate saddles where |g| ~ |z - a|^alpha
    k1 = _unit_field(flow, z)
    k2 = _unit_field(flow, z + 0.5 * h * sgn * k1)
    k3 = _unit_field(flow, z + 0.5 * h * sgn * k2)
    k4 = _unit_field(flow, z + h * sgn * k3)
    return z + h * sgn * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _exit_point(flow, domain, z, z_out, h, sgn):
    """Boundary crossing of the RK4 step from z, found by bisecting the step
    length; a chord between z and z_out would leave the isochromatic line."""
    lo, hi = 0.0, h
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if domain.contains(_rk4(flow, z, mid, sgn)):
            lo = mid
        else:
            hi = mid
    inside, outside = _rk4(flow, z, lo, sgn), _rk4(flow, z, hi, sgn)
    t = domain.exit_parameter(inside, outside)
    return inside + t * (outside - inside)


def reproject(flow, z: complex, target_phase: complex) -> complex:
    """Small move along the level line of |f| that restores the phase of f."""
    w = complex(flow.f(z))
    if w == 0 or not cmath.isfinite(w):
        return z
    dphi = cmath.phase(target_phase * (w / abs(w)).conjugate())
    r = flow.logderiv_scalar(z)
    if r == 0 or not cmath.isfinite(r):
        return z
    dz = 1j * dphi / r  # d(log f) = r dz = i dphi
    if abs(dz) > 1e-3:
        return z
    return z + dz


def integrate_orbit(f, start: complex, direction: str = "forward", domain=Disk(0j, 1.0),
                    fixed_points=None, tol: float = TOL, h_min: float = H_MIN, h_max: float = H_MAX,
                    max_steps: int = MAX_STEPS) -> Orbit:
    """Follow one orbit with step-doubling RK4 until a fixed point, the domain
    boundary or the step limit is reached.

    ``fixed_points`` may be a SingularityReport or (location, kind) pairs; when
    omitted they are located in the bounding box of ``domain``.
    """
    flow = f if isinstance(f, PhaseFlow) else PhaseFlow(f)
    if direction not in ("forward", "reversed"):
        raise ValueError("direction must be 'forward' or 'reversed'")
    sgn = 1.0 if direction == "forward" else -1.0
    if fixed_points is None:
        fixed_points = classify_fixed_points(flow.source, _bounding_rect(domain))
    fixed = fixed_points_from(fixed_points)
    fixed_loc = np.array([p.location for p in fixed], dtype=complex)

    z = complex(start)
    g0 = flow(z)
    if abs(g0) <= 1e-12:
        raise ValueError(f"start point {z!r} is a fixed point of the flow")
    target = complex(flow.phase(z))
    pts = [z]

    def nearest(p):
        if not fixed:
            return None, math.inf
        d = np.abs(fixed_loc - p)
        i = int(np.argmin(d))
        return fixed[i], float(d[i])

    def reached(p):
        fp, d = nearest(p)
        return fp if d < FIXED_RADIUS else None

    hit = reached(z)
    if hit is not None:
        return Orbit(np.array(pts), f"reached-{hit.kind}", hit.index)

    h = min(h_max, 0.01)
    still = 0
    for step in range(1, max_steps + 1):
        # never step across a fixed point: the unit field flips sign there
        cap = 0.5 * nearest(z)[1]
        floor = min(h_min, cap)
        h = min(h, cap)
        while True:
            big = _rk4(flow, z, h, sgn)
            mid = _rk4(flow, z, h / 2, sgn)
            small = _rk4(flow, mid, h / 2, sgn)
            err = abs(small - big) / 15.0
            local_tol = tol
            if err <= local_tol or h <= floor:
                break
            h = max(floor, h * max(0.2, 0.9 * (local_tol / err) ** 0.2))
        z_new = small
        if err > 0:
            h_next = h * min(2.0, 0.9 * (local_tol / err) ** 0.2)
        else:
            h_next = 2 * h
        h = min(h_max, max(h_min, h_next))

        if not cmath.isfinite(z_new):
            raise StagnationError(f"integration blew up near {z!r}")
        if not domain.contains(z_new):
            pts.append(_exit_point(flow, domain, z, z_new, h, sgn))
            return Orbit(np.array(pts), "exited-domain")
        still = still + 1 if abs(z_new - z) < 1e-15 * (1 + abs(z)) else 0
        z = z_new
        if step % REPROJECT_EVERY == 0:
            zp = reproject(flow, z, target)
            if domain.contains(zp):
                z = zp
        pts.append(z)
        hit = reached(z)
        if hit is not None:
            return Orbit(np.array(pts), f"reached-{hit.kind}", hit.index)
        if still >= 1000:
            raise StagnationError(f"orbit stalled at {z!r} away from any known fixed point")
    return Orbit(np.array(pts), "step-limit")


def taylor_coefficient(flow, a: complex, k: int, rho: float = CAUCHY_RADIUS, n: int = 64) -> complex:
    """k-th Taylor coefficient of f at a by the trapezoidal Cauchy integral."""
    w = rho * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.asarray(flow.f(a + w), dtype=complex)
    return complex(np.mean(vals / w ** k))


def unstable_manifolds(f, saddle, domain=Disk(0j, 1.0), fixed_points=None) -> list:
    """The alpha+1 outgoing isochromatic rays of a saddle (a, alpha).

    Seeds sit on a small circle at the directions where the local model
    f(a) + c (z - a)^(alpha+1) keeps the phase of f(a); they alternate between
    |f| increasing (unstable, integrated forward) and decreasing (stable).
    """
    flow = f if isinstance(f, PhaseFlow) else PhaseFlow(f)
    a, alpha = complex(saddle[0]), int(saddle[1])
    fa = complex(flow.f(a))
    c = taylor_coefficient(flow, a, alpha + 1)
    if fa == 0 or c == 0 or not (cmath.isfinite(fa) and cmath.isfinite(c)):
        raise SeedClassificationError(f"no usable local model at {a!r}")
    base = (cmath.phase(fa) - cmath.phase(c)) / (alpha + 1)
    n_dir = 2 * (alpha + 1)
    target = fa / abs(fa)
    seeds, signs = [], []
    for j in range(n_dir):
        theta = base + math.pi * j / (alpha + 1)
        z = a + SEED_RADIUS * cmath.exp(1j * theta)
        for _ in range(3):
            z = reproject(flow, z, target)
        seeds.append(z)
        signs.append(abs(complex(flow.f(z))) - abs(fa))
    expected = [1 if j % 2 == 0 else -1 for j in range(n_dir)]
    if any(s == 0 or (s > 0) != (e > 0) for s, e in zip(signs, expected)):
        raise SeedClassificationError(
            f"|f| does not alternate around the saddle at {a!r}: {signs}")
    if fixed_points is None:
        fixed_points = classify_fixed_points(flow.source, _bounding_rect(domain))
    return [integrate_orbit(flow, seeds[j], "forward", domain, fixed_points)
            for j in range(0, n_dir, 2)]
