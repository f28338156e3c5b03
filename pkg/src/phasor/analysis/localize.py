"""Quadtree localisation of zeros and poles, and color saddles."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from ..errors import RefinementExhaustedError, SingularOnPathError
from ..expr.ast import format_number
from ..geometry import Rect, rect_path
from .chromatic import as_expr, chromatic_number, require_holomorphic

NUDGE = 1e-3
MAX_NUDGES = 5
SADDLE_F_MIN = 1e-9

_PATH_ERRORS = (SingularOnPathError, RefinementExhaustedError)


@dataclass(frozen=True)
class Entry:
    location: complex
    kind: str  # "zero" | "pole" | "saddle"
    order: int
    box_radius: float

    @property
    def rays(self) -> int:
        """Isochromatic rays meeting at a saddle of this order."""
        return 2 * self.order + 2

    def line(self) -> str:
        z = self.location
        return (f"{self.kind} {format_number(z.real)} {format_number(z.imag)} "
                f"{self.order} {format_number(self.box_radius)}")


@dataclass(frozen=True)
class SingularityReport:
    entries: tuple
    mixed_boxes: tuple = field(default=())

    @property
    def net_count(self) -> int:
        return (sum(e.order for e in self.entries if e.kind == "zero")
                - sum(e.order for e in self.entries if e.kind == "pole"))

    def of_kind(self, kind):
        return [e for e in self.entries if e.kind == kind]

    def lines(self):
        return [e.line() for e in self.entries] + [f"net_count {self.net_count}"]

    def __str__(self):
        return "\n".join(self.lines())


def _winding(f, box: Rect) -> int:
    return chromatic_number(f, rect_path(box)).winding


def _outer(f, rect: Rect):
    side = max(rect.width, rect.height)
    for k in range(MAX_NUDGES + 1):
        box = rect.expand(k * NUDGE * side)
        try:
            return box, _winding(f, box)
        except _PATH_ERRORS:
            continue
    raise RefinementExhaustedError("a singularity sits on the boundary of the search rectangle")


def _quadrants(box: Rect, sx: float, sy: float):
    return (Rect(box.xmin, sx, box.ymin, sy), Rect(sx, box.xmax, box.ymin, sy),
            Rect(box.xmin, sx, sy, box.ymax), Rect(sx, box.xmax, sy, box.ymax))


def _split(f, box: Rect, winding: int):
    """Children with their windings; split lines nudged +x, +y, +x, ... on failure."""
    side = max(box.width, box.height)
    cx, cy = (box.xmin + box.xmax) / 2, (box.ymin + box.ymax) / 2
    ox = oy = 0.0
    for attempt in range(MAX_NUDGES + 1):
        kids = _quadrants(box, cx + ox, cy + oy)
        try:
            ws = [_winding(f, k) for k in kids]
        except _PATH_ERRORS:
            ws = None
        if ws is not None and sum(ws) == winding:
            return list(zip(kids, ws))
        if attempt % 2 == 0:
            ox += NUDGE * side
        else:
            oy += NUDGE * side
    raise RefinementExhaustedError(f"could not split box {box} cleanly after {MAX_NUDGES} nudges")


def _is_mixed(f, box: Rect) -> bool:
    cx, cy = (box.xmin + box.xmax) / 2, (box.ymin + box.ymax) / 2
    try:
        ws = [_winding(f, k) for k in _quadrants(box, cx, cy)]
    except _PATH_ERRORS:
        return False
    return any(w > 0 for w in ws) and any(w < 0 for w in ws)


def polish(f, df, z0: complex, order: int, box: Rect, iterations: int = 60) -> complex:
    """Multiplicity-aware Newton from the box center, kept only if it stays inside.

    For a zero of order k the step is z -= k f/f'; for a pole (Newton on 1/f)
    it is z += k f/f'.
    """
    z = z0
    sign = 1 if order > 0 else -1
    k = abs(order)
    best, best_res = z0, _residual(f, z0, sign)
    for _ in range(iterations):
        fz, dfz = complex(f(z)), complex(df(z))
        if fz == 0 or not (cmath.isfinite(fz) and cmath.isfinite(dfz)) or dfz == 0:
            break
        step = sign * k * fz / dfz
        if not cmath.isfinite(step):
            break
        z = z - step
        if not box.contains(z):
            break
        res = _residual(f, z, sign)
        if res < best_res:
            best, best_res = z, res
        elif res > 4 * best_res:
            # roundoff regime: iterates wander once the residual hits the noise floor
            break
        if abs(step) <= 1e-15 * (1 + abs(z)):
            break
    return best


def _residual(f, z, sign):
    w = complex(f(z))
    if sign < 0:
        return 0.0 if not cmath.isfinite(w) else 1 / abs(w) if w != 0 else float("inf")
    return abs(w) if cmath.isfinite(w) else float("inf")


def localize_singularities(f, rect: Rect, min_box: float = 1e-3, refine: bool = True,
                           scan_levels: int = 4) -> SingularityReport:
    """Zeros (positive winding) and poles (negative) by recursive subdivision.

    A box with winding 0 may still hide a zero and a pole of equal order, so
    the first ``scan_levels`` levels are split regardless; deeper zero-winding
    boxes are dropped.
    """
    f = as_expr(f)
    require_holomorphic(f)
    df = f.derivative if refine else None
    outer, w0 = _outer(f, rect)
    entries, mixed = [], []
    stack = [(outer, w0, 0)]
    while stack:
        box, w, level = stack.pop()
        if w == 0 and level >= scan_levels:
            continue
        if max(box.width, box.height) < min_box:
            if w == 0:
                continue
            loc = box.center
            if refine:
                loc = polish(f, df, loc, w, box)
            if _is_mixed(f, box):
                mixed.append(box)
            entries.append(Entry(loc, "zero" if w > 0 else "pole", abs(w),
                                 max(box.width, box.height) / 2))
            continue
        stack.extend((kid, kw, level + 1) for kid, kw in _split(f, box, w))
    entries.sort(key=lambda e: (e.location.real, e.location.imag))
    mixed.sort(key=lambda b: (b.xmin, b.ymin))
    return SingularityReport(tuple(entries), tuple(mixed))


def find_saddles(f, rect: Rect, min_box: float = 1e-3) -> SingularityReport:
    """Zeros of f' where f itself is not (numerically) zero: color saddles."""
    f = as_expr(f)
    require_holomorphic(f)
    rep = localize_singularities(f.derivative, rect, min_box)
    saddles = []
    for e in rep.of_kind("zero"):
        fz = complex(f(e.location))
        if cmath.isfinite(fz) and abs(fz) >= SADDLE_F_MIN:
            saddles.append(Entry(e.location, "saddle", e.order, e.box_radius))
    return SingularityReport(tuple(saddles), rep.mixed_boxes)
