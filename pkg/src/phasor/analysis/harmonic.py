"""Zeros of non-holomorphic maps (harmonic polynomials) via zero-line crossings."""

from __future__ import annotations

import math

import numpy as np

from ..geometry import Rect

WILMSHURST_FRAME = Rect(-2.5, 3.5, -3.0, 3.0)


def wilmshurst(n: int = 4) -> str:
    """Source of Im(e^{-i pi/4} z^n) + i Im(e^{i pi/4} (z-1)^n)."""
    q = repr(math.pi / 4)
    return f"im(exp(-i*{q})*z^{n})+i*im(exp(i*{q})*(z-1)^{n})"


def _newton2(fn, z, h=1e-7, steps=40):
    """Real 2D Newton on (Re f, Im f) with a finite-difference Jacobian."""
    for _ in range(steps):
        w = complex(fn(z))
        if not math.isfinite(abs(w)):
            return None
        if abs(w) < 1e-15:
            return z
        wx = (complex(fn(z + h)) - complex(fn(z - h))) / (2 * h)
        wy = (complex(fn(z + 1j * h)) - complex(fn(z - 1j * h))) / (2 * h)
        J = np.array([[wx.real, wy.real], [wx.imag, wy.imag]])
        try:
            d = np.linalg.solve(J, [-w.real, -w.imag])
        except np.linalg.LinAlgError:
            return None
        z = z + complex(d[0], d[1])
        if math.hypot(*d) < 1e-14 * (1 + abs(z)):
            return z
    return z if abs(complex(fn(z))) < 1e-9 else None


def zero_line_crossings(fn, rect: Rect, res: int = 400, tol: float = 1e-6):
    """Points where both Re f and Im f vanish.

    Grid cells in which both the real and the imaginary part change sign are
    candidates; each is polished by 2D Newton and duplicates are merged.
    """
    x = np.linspace(rect.xmin, rect.xmax, res + 1)
    y = np.linspace(rect.ymin, rect.ymax, res + 1)
    Z = x[None, :] + 1j * y[:, None]
    W = np.asarray(fn(Z))

    def changes(a):
        s = np.sign(a)
        c = np.stack([s[:-1, :-1], s[1:, :-1], s[:-1, 1:], s[1:, 1:]])
        return (c.max(axis=0) > 0) & (c.min(axis=0) < 0) | (c == 0).any(axis=0)

    cand = changes(W.real) & changes(W.imag)
    zeros = []
    for r, c in zip(*np.nonzero(cand)):
        z0 = complex((x[c] + x[c + 1]) / 2, (y[r] + y[r + 1]) / 2)
        z = _newton2(fn, z0)
        if z is None or not rect.contains(z):
            continue
        if all(abs(z - q) > tol for q in zeros):
            zeros.append(z)
    zeros.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return zeros
