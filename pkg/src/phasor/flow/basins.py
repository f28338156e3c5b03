"""Basins of the zeros of a finite Blaschke product under the reversed phase flow."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..analysis.chromatic import as_expr, derivative_of, sample_phase_loop
from ..analysis.localize import find_saddles
from ..errors import BoundViolationError
from ..expr.ast import format_number
from ..geometry import UNIT_DISK, PathPolyline, Rect
from ..render import Frame
from .field import BlaschkeProduct, PhaseFlow
from .integrate import FixedPoint, Orbit, unstable_manifolds

log = logging.getLogger(__name__)

PROJECT_TOL = 1e-5
MERGE_TOL = 1e-6
ARC_PROBE_RADIUS = 1 - 1e-3
LABEL_STEP = 0.01
LABEL_MAX_STEPS = 5000

TWO_PI = 2 * math.pi


@dataclass
class Arc:
    start: float  # radians in [0, 2 pi)
    end: float  # may exceed 2 pi when the arc wraps through angle 0
    owner: int  # 1-based zero index

    def contains(self, angle: float) -> bool:
        a = (angle - self.start) % TWO_PI
        return a < (self.end - self.start) or (self.end - self.start) >= TWO_PI


@dataclass
class BasinDecomposition:
    zeros: tuple  # ((b, beta), ...)
    saddles: tuple  # ((a, alpha), ...)
    manifolds: list  # Orbit per unstable ray
    separating_points: tuple  # angles in [0, 2 pi), ascending
    arcs: list
    labels: np.ndarray | None = None  # (rows, cols) int; 0 based zero index, -1 outside the disk
    frame: Frame | None = None

    @property
    def m(self) -> int:
        return len(self.zeros)

    @property
    def k(self) -> int:
        return len(self.saddles)

    @property
    def s(self) -> int:
        return len(self.arcs)

    def serialize(self) -> str:
        out = ["ZEROS"]
        out += [f"{format_number(b.real)} {format_number(b.imag)} {beta}" for b, beta in self.zeros]
        out.append("SADDLES")
        out += [f"{format_number(a.real)} {format_number(a.imag)} {al}" for a, al in self.saddles]
        out.append("SEPARATING_POINTS")
        out += [format_number(t / TWO_PI) for t in self.separating_points]
        out.append("SEQUENCE")
        out.append(" ".join(str(i) for i in structure_sequence(self)))
        return "\n".join(out) + "\n"


def _as_blaschke(spec) -> BlaschkeProduct:
    if isinstance(spec, BlaschkeProduct):
        return spec
    if isinstance(spec, dict):
        return BlaschkeProduct(tuple(spec["zeros"]), spec.get("c", 1.0))
    return BlaschkeProduct(tuple(spec))


def blaschke_saddles(B: BlaschkeProduct, min_box: float = 1e-3):
    """Saddles (a, alpha) of B inside the unit disk."""
    rep = find_saddles(B.expr, Rect(-1.0, 1.0, -1.0, 1.0), min_box)
    return tuple((e.location, e.order) for e in rep.entries if abs(e.location) < 1)


def _fixed_list(B: BlaschkeProduct, saddles):
    pts = [FixedPoint(b, "zero", i, beta) for i, (b, beta) in enumerate(B.zeros)]
    pts += [FixedPoint(a, "saddle", i, al) for i, (a, al) in enumerate(saddles)]
    return pts


def _capture_radii(B, saddles):
    """Radius around each zero inside which the reversed flow is taken as captured."""
    crit = [b for b, _ in B.zeros] + [a for a, _ in saddles]
    radii = []
    for b, _ in B.zeros:
        others = [abs(b - c) for c in crit if c != b] + [1 - abs(b)]
        radii.append(0.25 * min(others))
    return np.array(radii)


def label_points(B: BlaschkeProduct, z, saddles=None, step: float = LABEL_STEP) -> np.ndarray:
    """0-based index of the zero each point flows into under the reversed flow.

    All points advance together with RK4 on the unit direction field, with the
    step reduced near saddles and zeros; a point is captured once it is inside
    the small disk of a zero that contains no other critical point.
    """
    if saddles is None:
        saddles = blaschke_saddles(B)
    flow = PhaseFlow(B)
    z = np.array(z, dtype=complex).ravel()
    zeros = np.array([b for b, _ in B.zeros], dtype=complex)
    sad = np.array([a for a, _ in saddles], dtype=complex)
    radii = _capture_radii(B, saddles)
    crit = np.concatenate([zeros, sad])
    label = np.full(len(z), -1, dtype=int)

    def unit(p):
        g = flow(p)
        a = np.abs(g)
        with np.errstate(all="ignore"):
            return np.where(a > 0, g / a, 0)

    def captured(p, idx):
        d = np.abs(p[:, None] - zeros[None, :])
        hit = d < radii[None, :]
        got = hit.any(axis=1)
        label[idx[got]] = np.argmax(hit[got], axis=1)
        return ~got

    active = np.arange(len(z))
    p = z.copy()
    keep = captured(p, active)
    active, p = active[keep], p[keep]
    for _ in range(LABEL_MAX_STEPS):
        if not len(active):
            break
        dist = np.abs(p[:, None] - crit[None, :]).min(axis=1)
        h = -np.clip(0.25 * dist, 1e-4, step)
        k1 = unit(p)
        k2 = unit(p + 0.5 * h * k1)
        k3 = unit(p + 0.5 * h * k2)
        k4 = unit(p + h * k3)
        p = p + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        keep = captured(p, active)
        active, p = active[keep], p[keep]
    if len(active):
        # stuck on a stable manifold of a saddle: fall back to the nearest zero
        label[active] = np.argmin(np.abs(p[:, None] - zeros[None, :]), axis=1)
    return label


def separating_angles(manifolds) -> list:
    angles = []
    for o in manifolds:
        if o.termination != "exited-domain":
            continue
        e = o.end
        if abs(abs(e) - 1) > PROJECT_TOL:
            continue
        angles.append(math.atan2(e.imag, e.real) % TWO_PI)
    angles.sort()
    merged = []
    for t in angles:
        if merged and abs(t - merged[-1]) < MERGE_TOL:
            continue
        merged.append(t)
    if len(merged) > 1 and merged[0] + TWO_PI - merged[-1] < MERGE_TOL:
        merged.pop()
    return merged


def _wall_mask(frame: Frame, manifolds) -> np.ndarray:
    """Pixels crossed by an unstable manifold (4-connected components stay separated)."""
    mask = np.zeros((frame.yres, frame.xres), dtype=bool)
    spacing = 0.25 * min(frame.dx, frame.dy)
    for o in manifolds:
        pts = np.asarray(o.points, dtype=complex)
        seg = []
        for a, b in zip(pts[:-1], pts[1:]):
            n = max(1, int(math.ceil(abs(b - a) / spacing)))
            seg.append(a + (b - a) * np.arange(n) / n)
        seg.append(pts[-1:])
        q = np.concatenate(seg)
        col = np.floor((q.real - frame.xmin) / frame.dx).astype(int)
        row = np.floor((frame.ymax - q.imag) / frame.dy).astype(int)
        ok = (col >= 0) & (col < frame.xres) & (row >= 0) & (row < frame.yres)
        mask[row[ok], col[ok]] = True
    return mask


def label_grid(B: BlaschkeProduct, frame: Frame, manifolds, saddles) -> np.ndarray:
    Z = frame.grid()
    inside = np.abs(Z) < 1
    walls = _wall_mask(frame, manifolds)
    comp, ncomp = ndimage.label(inside & ~walls)  # 4-connectivity by default
    labels = np.full(Z.shape, -1, dtype=int)
    if ncomp:
        # one representative per component, as far from any wall as possible
        depth = ndimage.distance_transform_edt(comp > 0)
        idx = ndimage.maximum_position(depth, comp, index=np.arange(1, ncomp + 1))
        reps = np.array([Z[r, c] for r, c in idx])
        owners = label_points(B, reps, saddles)
        lut = np.concatenate([[-1], owners])
        labels = lut[comp]
    wall_px = inside & walls
    if wall_px.any():
        labels[wall_px] = label_points(B, Z[wall_px], saddles)
    return labels


def basin_decomposition(spec, frame: Frame | None = None, saddles=None) -> BasinDecomposition:
    """Saddles, unstable manifolds, boundary arcs and (optionally) a label grid."""
    B = _as_blaschke(spec)
    if saddles is None:
        saddles = blaschke_saddles(B)
    m, k, n = len(B.zeros), len(saddles), B.degree
    fixed = _fixed_list(B, saddles)
    manifolds = []
    for a, al in saddles:
        manifolds += unstable_manifolds(B, (a, al), UNIT_DISK, fixed)
    seps = separating_angles(manifolds)

    if len(seps) < 2:
        probes = [0.0] if not seps else [seps[0] + math.pi]
        owners = label_points(B, [ARC_PROBE_RADIUS * np.exp(1j * t) for t in probes], saddles)
        start = seps[0] if seps else 0.0
        arcs = [Arc(start, start + TWO_PI, int(owners[0]) + 1)]
    else:
        ends = seps[1:] + [seps[0] + TWO_PI]
        mids = [(a + b) / 2 for a, b in zip(seps, ends)]
        owners = label_points(B, ARC_PROBE_RADIUS * np.exp(1j * np.array(mids)), saddles)
        arcs = [Arc(a, b, int(o) + 1) for a, b, o in zip(seps, ends, owners)]

    s = len(arcs)
    sum_alpha = sum(al for _, al in saddles)
    sum_beta = sum(beta for _, beta in B.zeros)
    log.info("basins: m=%d k=%d s=%d sum(alpha)=%d (m-1=%d) sum(beta)=%d (n=%d, n-1=%d)",
             m, k, s, sum_alpha, m - 1, sum_beta, n, n - 1)
    upper = max(1, m + k - 1)
    if not (m <= s <= upper):
        raise BoundViolationError(f"s = {s} outside [{m}, {upper}] (m = {m}, k = {k})")
    labels = label_grid(B, frame, manifolds, saddles) if frame is not None else None
    return BasinDecomposition(B.zeros, tuple(saddles), manifolds, tuple(seps), arcs, labels, frame)


def _min_rotation(seq):
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


def structure_sequence(decomp: BasinDecomposition) -> tuple:
    """Owners of the arcs counterclockwise from the arc containing angle 0,
    renumbered by first appearance, then rotated to the lexicographic minimum."""
    arcs = decomp.arcs
    start = next((i for i, a in enumerate(arcs) if a.contains(0.0)), 0)
    raw = [arcs[(start + i) % len(arcs)].owner for i in range(len(arcs))]
    names = {}
    seq = []
    for o in raw:
        if o not in names:
            names[o] = len(names) + 1
        seq.append(names[o])
    return _min_rotation(seq)


def boundary_phase_measure(f, curve: PathPolyline, bins: int) -> np.ndarray:
    """Phase transported through each of ``bins`` equal arc-length pieces of a
    closed curve, in turns. The weights add up to the chromatic number."""
    if not curve.closed:
        raise ValueError("boundary measure needs a closed curve")
    if bins < 1:
        raise ValueError("bins must be positive")
    if isinstance(f, BlaschkeProduct):
        f = f.expr
    f = as_expr(f)
    dfn = derivative_of(f)
    verts = np.asarray(curve.vertices, dtype=complex)
    verts = np.append(verts, verts[0])
    seglen = np.abs(np.diff(verts))
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]

    def at(s):
        i = min(int(np.searchsorted(cum, s, side="right")) - 1, len(seglen) - 1)
        t = (s - cum[i]) / seglen[i] if seglen[i] > 0 else 0.0
        return verts[i] + t * (verts[i + 1] - verts[i]), i

    weights = np.zeros(bins)
    for j in range(bins):
        s0, s1 = total * j / bins, total * (j + 1) / bins
        p0, i0 = at(s0)
        p1, i1 = at(s1) if j < bins - 1 else (verts[-1], len(seglen) - 1)
        pts = [p0] + [verts[i] for i in range(i0 + 1, i1 + 1) if cum[i] > s0 and cum[i] < s1] + [p1]
        # at least 8 samples per vertex-to-vertex piece before refinement
        dense = []
        for a, b in zip(pts[:-1], pts[1:]):
            dense.append(a + (b - a) * np.arange(8) / 8)
        dense.append(np.array([pts[-1]]))
        _, _, inc = sample_phase_loop(f, np.concatenate(dense), closed=False, dfn=dfn)
        weights[j] = inc.sum() / TWO_PI
    return weights
