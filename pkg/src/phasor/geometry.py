"""Rectangles, disks and polyline paths in the complex plane."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def parse(cls, text: str) -> "Rect":
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("expected xmin,xmax,ymin,ymax")
        return cls(*parts)

    @classmethod
    def square(cls, center: complex, side: float) -> "Rect":
        h = side / 2
        return cls(center.real - h, center.real + h, center.imag - h, center.imag + h)

    @property
    def width(self):
        return self.xmax - self.xmin

    @property
    def height(self):
        return self.ymax - self.ymin

    @property
    def center(self) -> complex:
        return complex((self.xmin + self.xmax) / 2, (self.ymin + self.ymax) / 2)

    @property
    def corners(self):
        """Counterclockwise from the lower left."""
        return (complex(self.xmin, self.ymin), complex(self.xmax, self.ymin),
                complex(self.xmax, self.ymax), complex(self.xmin, self.ymax))

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        return (z.real >= self.xmin) & (z.real <= self.xmax) & (z.imag >= self.ymin) & (z.imag <= self.ymax)

    def translate(self, p: complex) -> "Rect":
        return Rect(self.xmin + p.real, self.xmax + p.real, self.ymin + p.imag, self.ymax + p.imag)

    def expand(self, d: float) -> "Rect":
        return Rect(self.xmin - d, self.xmax + d, self.ymin - d, self.ymax + d)

    def exit_parameter(self, a: complex, b: complex) -> float:
        """Largest t in [0, 1] with a + t(b - a) still inside (a must be inside)."""
        t = 1.0
        d = b - a
        for lo, hi, p, dp in ((self.xmin, self.xmax, a.real, d.real), (self.ymin, self.ymax, a.imag, d.imag)):
            if dp > 0 and p + dp > hi:
                t = min(t, (hi - p) / dp)
            elif dp < 0 and p + dp < lo:
                t = min(t, (lo - p) / dp)
        return max(t, 0.0)


@dataclass(frozen=True)
class Disk:
    center: complex = 0j
    radius: float = 1.0

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) <= self.radius

    def exit_parameter(self, a: complex, b: complex) -> float:
        # solve |a - c + t d| = r for the root in [0, 1]
        p, d = a - self.center, b - a
        A = abs(d) ** 2
        if A == 0:
            return 1.0
        B = 2 * (p.conjugate() * d).real
        C = abs(p) ** 2 - self.radius ** 2
        disc = max(B * B - 4 * A * C, 0.0)
        t = (-B + disc ** 0.5) / (2 * A)
        return min(max(t, 0.0), 1.0)


UNIT_DISK = Disk(0j, 1.0)


@dataclass(frozen=True)
class PathPolyline:
    vertices: tuple
    closed: bool = True

    def __post_init__(self):
        v = tuple(complex(p) for p in self.vertices)
        object.__setattr__(self, "vertices", v)
        if self.closed and len(v) < 3:
            raise ValueError("a closed path needs at least 3 vertices")
        for a, b in zip(v, v[1:] + ((v[0],) if self.closed else ())):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        v = self.vertices
        nxt = v[1:] + ((v[0],) if self.closed else ())
        return list(zip(v, nxt))

    def reversed(self) -> "PathPolyline":
        return PathPolyline(tuple(reversed(self.vertices)), self.closed)

    def length(self) -> float:
        return float(sum(abs(b - a) for a, b in self.edges()))


def circle_path(center: complex = 0j, radius: float = 1.0, n: int = 64) -> PathPolyline:
    t = 2 * np.pi * np.arange(n) / n
    return PathPolyline(tuple(center + radius * np.exp(1j * t)), True)


def rect_path(rect: Rect) -> PathPolyline:
    return PathPolyline(rect.corners, True)
