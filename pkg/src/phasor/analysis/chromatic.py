"""Chromatic numbers (phase winding) of closed paths, and zero/pole counting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NonHolomorphicError, RefinementExhaustedError, SingularOnPathError
from ..geometry import PathPolyline, Rect, rect_path

MAX_DEPTH = 20
STEP_LIMIT = math.pi / 2


@dataclass(frozen=True)
class ChromaticResult:
    winding: int
    samples_used: int
    max_phase_step: float

    def __int__(self):
        return self.winding


def as_expr(f):
    if isinstance(f, str):
        from ..expr import parse

        return parse(f)
    return f


def require_holomorphic(f):
    if not getattr(f, "holomorphic", True):
        raise NonHolomorphicError(f"{f} is not holomorphic (contains conj/re/im/abs)")


def _unit(fn, z):
    """Phase of fn at z; raises SingularOnPath at zeros, poles or undefined points."""
    w = np.asarray(fn(z), dtype=complex)
    a = np.abs(w)
    bad = ~np.isfinite(a) | (a == 0)
    if bad.any():
        raise SingularOnPathError(complex(np.asarray(z)[bad][0]))
    return w / a


def _initial_params(path: PathPolyline, per_edge):
    edges = path.edges()
    lengths = np.array([abs(b - a) for a, b in edges])
    total = lengths.sum()
    pts = []
    for (a, b), L in zip(edges, lengths):
        n = max(per_edge, int(math.ceil(per_edge * len(edges) * L / total)))
        t = np.arange(n) / n
        pts.append(a + t * (b - a))
    return np.concatenate(pts)


def _rate(dfn, fn, z):
    """|f'/f| at z, or 0 where it cannot be evaluated."""
    if dfn is None:
        return np.zeros(len(z))
    with np.errstate(all="ignore"):
        r = np.abs(np.asarray(dfn(z), dtype=complex) / np.asarray(fn(z), dtype=complex))
    return np.where(np.isfinite(r), r, 0.0)


def sample_phase_loop(fn, points, closed=True, max_depth=MAX_DEPTH, dfn=None):
    """Refine a closed (or open) sample sequence until every principal phase
    increment is below pi/2. Returns (points, unit phases, increments).

    With ``dfn`` (the derivative) a segment is also split while
    |f'/f| * length, the first-order phase change, reaches pi/2; this catches
    segments across which the phase turns by a whole multiple of 2 pi.
    """
    z = np.asarray(points, dtype=complex)
    u = _unit(fn, z)
    rate = _rate(dfn, fn, z)
    depth = np.zeros(len(z), dtype=int)  # depth of the segment starting at each point
    while True:
        nxt_z = np.roll(z, -1) if closed else z[1:]
        nxt_u = np.roll(u, -1) if closed else u[1:]
        nxt_r = np.roll(rate, -1) if closed else rate[1:]
        zz, uu, rr = (z, u, rate) if closed else (z[:-1], u[:-1], rate[:-1])
        inc = np.angle(nxt_u * np.conj(uu))
        bad = (np.abs(inc) >= STEP_LIMIT) | (np.maximum(rr, nxt_r) * np.abs(nxt_z - zz) >= STEP_LIMIT)
        if not bad.any():
            return z, u, inc
        if (depth[: len(bad)][bad] >= max_depth).any():
            raise RefinementExhaustedError(
                f"phase still jumps by >= pi/2 after {max_depth} bisections")
        idx = np.nonzero(bad)[0]
        mids = 0.5 * (zz[idx] + nxt_z[idx])
        mu = _unit(fn, mids)
        mr = _rate(dfn, fn, mids)
        new_depth = depth[idx] + 1
        depth[idx] = new_depth
        # insert each midpoint right after its segment start
        z = np.insert(z, idx + 1, mids)
        u = np.insert(u, idx + 1, mu)
        rate = np.insert(rate, idx + 1, mr)
        depth = np.insert(depth, idx + 1, new_depth)


def derivative_of(f):
    """f' when f is a holomorphic expression, else None."""
    if getattr(f, "holomorphic", False) and hasattr(f, "derivative"):
        return f.derivative
    return None


def chromatic_number(f, path: PathPolyline, per_edge: int = 8) -> ChromaticResult:
    """Winding number of the phase of f along a closed polyline."""
    f = as_expr(f)
    if not path.closed:
        raise ValueError("chromatic number needs a closed path")
    z, u, inc = sample_phase_loop(f, _initial_params(path, per_edge), closed=True,
                                  dfn=derivative_of(f))
    total = inc.sum() / (2 * math.pi)
    return ChromaticResult(int(round(total)), len(z), float(np.abs(inc).max()))


def count_zeros_poles(f, rect: Rect) -> int:
    """n - p inside ``rect``: the chromatic number of its boundary."""
    f = as_expr(f)
    require_holomorphic(f)
    return chromatic_number(f, rect_path(rect)).winding
