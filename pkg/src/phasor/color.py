"""Color schemes for phase plots and domain coloring.

Every scheme is vectorised: :func:`colorize` maps an array of complex values
(sentinel convention: ``inf+0j`` infinity, ``nan`` undefined) to an
``(..., 3)`` uint8 array. The scalar helpers just wrap it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

GRAY = (128, 128, 128)
WHITE = (255, 255, 255)

JUMP_HALF_WIDTH = math.pi / 60
JUMP_FACTOR = 0.65

KINDS = ("plain", "sawtooth", "grid", "domain", "jump")


@dataclass(frozen=True)
class ColorScheme:
    kind: str = "plain"
    gray_depth: float = 0.5
    modulus_base: float = math.e
    phase_sectors: int = 12
    jump_phases: tuple = ()
    base: "ColorScheme | None" = field(default=None, compare=True)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown color scheme {self.kind!r}")
        if not 0 < self.gray_depth <= 1:
            raise ValueError("gray_depth must lie in (0, 1]")
        if self.modulus_base <= 1:
            raise ValueError("modulus_base must exceed 1")
        if int(self.phase_sectors) != self.phase_sectors or self.phase_sectors < 1:
            raise ValueError("phase_sectors must be a positive integer")
        if self.kind == "jump":
            if not self.jump_phases:
                raise ValueError("jump scheme needs at least one jump phase")
            phases = tuple(complex(p) for p in self.jump_phases)
            if any(abs(abs(p) - 1) > 1e-9 for p in phases):
                raise ValueError("jump phases must be unit complex numbers")
            object.__setattr__(self, "jump_phases", phases)
            if self.base is None:
                object.__setattr__(self, "base", ColorScheme("plain"))
            elif self.base.kind == "jump":
                raise ValueError("jump scheme cannot wrap another jump scheme")


PLAIN = ColorScheme("plain")


def jump(phases, base: ColorScheme = PLAIN) -> ColorScheme:
    return ColorScheme("jump", base.gray_depth, base.modulus_base, base.phase_sectors,
                       tuple(phases), base)


def parse_scheme(name: str, **params) -> ColorScheme:
    """CLI names: plain, sawtooth, grid, domain, jump:<phases in turns>[@base]."""
    name = name.strip()
    if name.startswith("jump:"):
        spec = name[5:]
        base = PLAIN
        if "@" in spec:
            spec, base_name = spec.split("@", 1)
            base = ColorScheme(_CLI_NAMES.get(base_name, base_name), **params)
        try:
            turns = [float(t) for t in spec.split(",") if t.strip()]
        except ValueError:
            raise ValueError(f"bad jump phases in {name!r}") from None
        return jump([cmath.exp(2j * math.pi * t) for t in turns], base)
    kind = _CLI_NAMES.get(name)
    if kind is None:
        raise ValueError(f"unknown color scheme {name!r}")
    return ColorScheme(kind, **params)


_CLI_NAMES = {"plain": "plain", "sawtooth": "sawtooth", "grid": "grid", "domain": "domain"}


def _hue(w):
    h = np.mod(np.angle(w) / (2 * np.pi), 1.0)
    return np.where(h >= 1.0, 0.0, h)


def hsv_rgb(h):
    """Fully saturated, full value HSV -> RGB floats in [0, 1]."""
    h6 = h * 6.0
    i = np.floor(h6).astype(int) % 6
    f = h6 - np.floor(h6)
    one, zero = np.ones_like(f), np.zeros_like(f)
    table = [
        (one, f, zero),
        (1 - f, one, zero),
        (zero, one, f),
        (zero, 1 - f, one),
        (f, zero, one),
        (one, zero, 1 - f),
    ]
    out = np.zeros(h.shape + (3,))
    for k, (r, g, b) in enumerate(table):
        m = i == k
        out[m] = np.stack([r[m], g[m], b[m]], axis=-1)
    return out


def _hsl_rgb(h, lightness):
    rgb = hsv_rgb(h)
    # full saturation: blend pure hue toward black (L < 1/2) or white (L > 1/2)
    L = lightness[..., None]
    return np.where(L <= 0.5, 2 * L * rgb, rgb + (2 * L - 1) * (1 - rgb))


def _sawtooth(x):
    return x - np.floor(x)


def _value(scheme: ColorScheme, w):
    g0 = scheme.gray_depth
    with np.errstate(divide="ignore", invalid="ignore"):
        mod = _sawtooth(np.log(np.abs(w)) / math.log(scheme.modulus_base))
    if scheme.kind == "sawtooth":
        return (1 - g0) + g0 * mod
    ph = _sawtooth(scheme.phase_sectors * _hue(w))
    return (1 - g0) + g0 * mod * ph


def _finite_colors(scheme: ColorScheme, w):
    kind = scheme.kind
    if kind == "jump":
        rgb = _finite_colors(scheme.base, w)
        theta = np.angle(w)
        near = np.zeros(w.shape, dtype=bool)
        for p in scheme.jump_phases:
            d = np.abs(np.angle(np.exp(1j * (theta - cmath.phase(p)))))
            near |= d <= JUMP_HALF_WIDTH
        return np.where(near[..., None], rgb * JUMP_FACTOR, rgb)
    h = _hue(w)
    if kind == "plain":
        return hsv_rgb(h)
    if kind in ("sawtooth", "grid"):
        return hsv_rgb(h) * _value(scheme, w)[..., None]
    if kind == "domain":
        return _hsl_rgb(h, (2 / np.pi) * np.arctan(np.abs(w)))
    raise ValueError(kind)


def colorize(scheme: ColorScheme, w) -> np.ndarray:
    """Colors for an array of values; returns uint8 with a trailing RGB axis."""
    w = np.asarray(w, dtype=complex)
    undefined = np.isnan(w.real) | np.isnan(w.imag)
    infinite = ~undefined & np.isinf(w)
    zero = w == 0
    ok = ~(undefined | infinite | zero)
    out = np.zeros(w.shape + (3,), dtype=np.uint8)
    wf = w[ok]
    out[ok] = np.clip(np.rint(_finite_colors(scheme, wf) * 255.0), 0, 255).astype(np.uint8)
    out[undefined] = GRAY
    out[infinite] = WHITE
    if scheme.kind == "domain" or (scheme.kind == "jump" and scheme.base.kind == "domain"):
        out[zero] = (0, 0, 0)
    else:
        out[zero] = GRAY
    return out


def _to_complex(w):
    return complex(w)  # ExtendedComplex implements __complex__ with sentinels


def scheme_apply(scheme: ColorScheme, w) -> tuple:
    r, g, b = colorize(scheme, np.array([_to_complex(w)]))[0]
    return int(r), int(g), int(b)


def phase_to_color(w) -> tuple:
    return scheme_apply(PLAIN, w)
