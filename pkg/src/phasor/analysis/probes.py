"""Local diagnostics: log-derivative density and the essential-singularity probe."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import RefinementExhaustedError, SingularOnCircleError, SingularOnPathError, SingularPointError
from .chromatic import as_expr, derivative_of, require_holomorphic, sample_phase_loop

PROBE_SAMPLES = 256


def log_derivative_density(f, z: complex) -> float:
    """|f'(z)/f(z)|, the density of isochromatic lines at z."""
    f = as_expr(f)
    require_holomorphic(f)
    fz = complex(f(complex(z)))
    if not cmath.isfinite(fz) or fz == 0:
        raise SingularPointError(f"f is zero or singular at {z!r}")
    dfz = complex(f.derivative(complex(z)))
    if not cmath.isfinite(dfz):
        raise SingularPointError(f"f' is not finite at {z!r}")
    return abs(dfz / fz)


def lifted_phase(f, points):
    """Adaptively refined closed loop and a continuous argument along it."""
    z, u, inc = sample_phase_loop(f, points, closed=True, dfn=derivative_of(f))
    theta0 = np.angle(u[0])
    theta = np.concatenate([[theta0], theta0 + np.cumsum(inc)])
    # close the loop exactly: the last value is the first plus a multiple of 2 pi
    theta[-1] = theta0 + 2 * math.pi * round(inc.sum() / (2 * math.pi))
    return np.append(z, z[0]), theta


def crossings(theta, color_angle: float) -> int:
    """How often a continuous argument passes through color_angle + 2 pi k."""
    k = np.floor((theta - color_angle) / (2 * math.pi))
    return int(np.abs(np.diff(k)).sum())


def essential_probe(f, z0: complex, color_phase: complex, radii) -> list:
    """Crossings of one fixed color on shrinking circles around z0.

    Counts that keep growing as the radius shrinks are evidence of an
    essential singularity; a constant count fits a zero or pole.
    """
    f = as_expr(f)
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly descending")
    color = cmath.phase(complex(color_phase))
    t = 2 * np.pi * np.arange(PROBE_SAMPLES) / PROBE_SAMPLES
    out = []
    for r in radii:
        pts = complex(z0) + r * np.exp(1j * t)
        try:
            _, theta = lifted_phase(f, pts)
        except (SingularOnPathError, RefinementExhaustedError) as exc:
            raise SingularOnCircleError(f"cannot follow the phase on |z - z0| = {r}: {exc}") from None
        out.append((r, crossings(theta, color)))
    return out
