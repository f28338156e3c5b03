"""Reconstructing a phase plot in the unit disk from a boundary coloring."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChromaticMismatchError,
    DiscontinuousColoringError,
    LocationOnBoundaryError,
    NonzeroChromaticNumberError,
)
from .render import Frame

GAP_LIMIT = math.pi / 2
UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryColoring:
    """Unit-modulus samples B(e^{2 pi i k/N}), k = 0..N-1."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex).ravel()
        n = len(s)
        if n < 64 or n & (n - 1):
            raise ValueError(f"need N a power of two >= 64, got {n}")
        if not np.all(np.isfinite(s)) or np.max(np.abs(np.abs(s) - 1)) > UNIMODULAR_TOL:
            raise ValueError("boundary samples must be unimodular within 1e-12")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @classmethod
    def from_function(cls, f, n: int = 256) -> "BoundaryColoring":
        """Phase of f sampled at the N-th roots of unity."""
        z = np.exp(2j * np.pi * np.arange(n) / n)
        w = np.asarray(f(z), dtype=complex)
        a = np.abs(w)
        if np.any(~np.isfinite(a) | (a == 0)):
            raise LocationOnBoundaryError("f has a zero, pole or undefined point on the circle")
        return cls(w / a)

    def rotate(self, k: int = 1) -> "BoundaryColoring":
        """Multiply by e^{ikt}: adds k to the chromatic number."""
        return BoundaryColoring(self.samples * np.exp(1j * k * self.angles))


def _increments(samples):
    inc = np.angle(np.roll(samples, -1) * np.conj(samples))
    bad = np.abs(inc) >= GAP_LIMIT
    if bad.any():
        k = int(np.argmax(bad))
        raise DiscontinuousColoringError(
            f"phase jumps by {abs(inc[k]):.3g} rad between samples {k} and {(k + 1) % len(samples)}")
    return inc


def chrom_of_coloring(B: BoundaryColoring) -> int:
    """Winding number of the sampled coloring."""
    return int(round(_increments(B.samples).sum() / (2 * math.pi)))


def lift(B: BoundaryColoring) -> np.ndarray:
    """Continuous argument phi_k with phi_0 = Arg B_0 (requires chromatic number 0)."""
    inc = _increments(B.samples)
    phi = np.empty(B.n)
    phi[0] = np.angle(B.samples[0])
    phi[1:] = phi[0] + np.cumsum(inc[:-1])
    return phi


def _analytic_coefficients(phi):
    """Taylor coefficients a_n of F = Phi + i Psi with Re F = phi on the circle, Psi(0) = 0.

    With phi = sum c_n e^{int}: F = c_0 + 2 sum_{n>0} c_n z^n, whose imaginary
    part is the conjugate with multiplier -i sign(n). The Nyquist term is split
    evenly between +-N/2.
    """
    n = len(phi)
    c = np.fft.fft(phi) / n
    a = np.empty(n // 2 + 1, dtype=complex)
    a[0] = c[0].real
    a[1:n // 2] = 2 * c[1:n // 2]
    a[n // 2] = c[n // 2].real
    return a


def _factor(z, zeros, poles):
    """prod ((z-a)/(1-conj(a) z))^k over zeros, divided by the same over poles."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    with np.errstate(all="ignore"):
        for (a, k), sgn in [(p, 1) for p in zeros] + [(p, -1) for p in poles]:
            a = complex(a)
            out = out * ((z - a) / (1 - np.conj(a) * z)) ** (sgn * k)
    return out


@dataclass
class DiskColoring:
    """Solution of the boundary value problem on a grid.

    ``phase`` holds e^{i Phi} times the phase of the prescribed factor inside
    the disk and NaN outside (``inside`` is the mask).
    """

    frame: Frame
    phase: np.ndarray
    inside: np.ndarray
    coefficients: np.ndarray  # Taylor coefficients of Phi + i Psi
    zeros: tuple = field(default=())
    poles: tuple = field(default=())

    def analytic(self, z):
        """Phi + i Psi (harmonic extension plus i times its conjugate)."""
        z = np.asarray(z, dtype=complex)
        return np.polyval(self.coefficients[::-1], z)

    def Phi(self, z):
        return self.analytic(z).real

    def Psi(self, z):
        return self.analytic(z).imag

    def f(self, z):
        """e^{i Phi - Psi} times the prescribed Blaschke factor: analytic in the disk."""
        g = np.exp(1j * self.analytic(z))
        if self.zeros or self.poles:
            g = g * _factor(z, self.zeros, self.poles)
        return g

    def phase_at(self, z):
        w = self.f(z)
        with np.errstate(all="ignore"):
            return w / np.abs(w)


def _solve(samples, frame, zeros=(), poles=()):
    B = BoundaryColoring(samples)
    coef = _analytic_coefficients(lift(B))
    Z = frame.grid()
    inside = np.abs(Z) <= 1
    sol = DiskColoring(frame, None, inside, coef, tuple(zeros), tuple(poles))
    phase = np.full(Z.shape, complex(math.nan, math.nan))
    phase[inside] = sol.phase_at(Z[inside])
    sol.phase = phase
    return sol


def extend_analytic(B: BoundaryColoring, frame: Frame) -> DiskColoring:
    """The unique analytic phase in the disk with boundary coloring B."""
    chrom = chrom_of_coloring(B)
    if chrom != 0:
        raise NonzeroChromaticNumberError(chrom)
    return _solve(B.samples, frame)


def _check_locations(items, what):
    out = []
    for loc, k in items:
        loc, k = complex(loc), int(k)
        if k < 1:
            raise ValueError(f"{what} order must be positive")
        if not abs(loc) < 1:
            raise LocationOnBoundaryError(f"{what} at {loc!r} is not strictly inside the disk")
        out.append((loc, k))
    return tuple(out)


def extend_with_singularities(B: BoundaryColoring, zeros, poles, frame: Frame) -> DiskColoring:
    """Meromorphic phase with the prescribed zeros and poles and boundary coloring B."""
    zeros = _check_locations(zeros, "zero")
    poles = _check_locations(poles, "pole")
    chrom = chrom_of_coloring(B)
    budget = sum(k for _, k in zeros) - sum(k for _, k in poles)
    if chrom != budget:
        raise ChromaticMismatchError(
            f"chromatic number {chrom} differs from zeros minus poles = {budget}")
    z = np.exp(1j * B.angles)
    F = _factor(z, zeros, poles)
    reduced = B.samples * np.conj(F / np.abs(F))
    return _solve(reduced, frame, zeros, poles)


def read_coloring(path) -> BoundaryColoring:
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    try:
        n = int(lines[0][0])
        vals = [complex(float(a), float(b)) for a, b in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed coloring file {path}: {exc}") from None
    if len(vals) != n:
        raise ValueError(f"coloring file {path} declares {n} samples but has {len(vals)}")
    return BoundaryColoring(np.array(vals))


def write_coloring(B: BoundaryColoring, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{B.n}\n")
        for w in B.samples:
            fh.write(f"{float(w.real)!r} {float(w.imag)!r}\n")
