"""Gamma, polygamma, Riemann zeta and Weierstrass p at double precision.

All functions take a complex scalar or array and follow the evaluator's
sentinel convention: ``inf+0j`` is the point at infinity (poles), ``nan+nanj``
is undefined (non-finite input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

INF = complex(math.inf, 0.0)
NAN = complex(math.nan, math.nan)

LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2, B_4, ..., B_24
BERNOULLI = tuple(
    Fraction(*p)
    for p in [
        (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6),
        (-3617, 510), (43867, 798), (-174611, 330), (854513, 138),
        (-236364091, 2730),
    ]
)
# B_2k / (2k)!
_EM_COEF = tuple(float(b / math.factorial(2 * k)) for k, b in enumerate(BERNOULLI, start=1))


def _prepare(z):
    z = np.asarray(z, dtype=complex)
    bad = ~np.isfinite(z)
    return z, bad


def _finish(z, out, bad, scalar):
    out = np.where(bad, NAN, out)
    # anything that overflowed on the way is the point at infinity
    nonfinite = ~np.isfinite(out) & ~bad
    out = np.where(nonfinite, INF, out)
    if scalar:
        return complex(out)
    return out


def _scalar_in(z):
    return np.ndim(z) == 0


def _nonpositive_integer(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


# -- elementary helpers -------------------------------------------------------

def sinpi(z):
    """sin(pi z) with exact argument reduction, so integers give exactly 0."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    r = x - 2.0 * np.round(x / 2.0)  # in [-1, 1]
    flip = np.abs(r) > 0.5
    r = np.where(flip, np.sign(r) - r, r)  # sin(pi - a) = sin a
    s = np.sin(np.pi * r)
    c = np.where(np.abs(r) == 0.5, 0.0, np.cos(np.pi * r))
    c = np.where(flip, -c, c)
    with np.errstate(over="ignore", invalid="ignore"):
        return s * np.cosh(np.pi * y) + 1j * c * np.sinh(np.pi * y)


def _log_sinpi(w):
    """A logarithm of sin(pi w) that stays finite for large |Im w|."""
    w = np.asarray(w, dtype=complex)
    big = np.abs(w.imag) > 5.0
    out = np.empty_like(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~big] = np.log(sinpi(w[~big]))
    wb = w[big]
    up = wb.imag > 0
    # sin(pi w) = e^{-i pi w} (1 - e^{2 i pi w}) (i/2) for Im w > 0, mirrored below
    e_up = np.exp(2j * np.pi * wb)
    e_dn = np.exp(-2j * np.pi * wb)
    val_up = -1j * np.pi * wb + np.log(0.5j) + np.log1p(-np.where(up, e_up, 0))
    val_dn = 1j * np.pi * wb + np.log(-0.5j) + np.log1p(-np.where(up, 0, e_dn))
    out[big] = np.where(up, val_up, val_dn)
    return out


# -- gamma ----------------------------------------------------------------------

def _loggamma_right(z):
    """log Gamma(z) for Re z >= 0.5 (Lanczos); not the principal branch."""
    zm = z - 1.0
    a = np.full_like(zm, LANCZOS_COEF[0])
    for k, c in enumerate(LANCZOS_COEF[1:], start=1):
        a = a + c / (zm + k)
    t = zm + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(a)


def gamma(z):
    """Gamma function; poles at 0, -1, -2, ... return the point at infinity."""
    scalar = _scalar_in(z)
    z, bad = _prepare(z)
    zz = np.where(bad, 0.5, z)
    poles = _nonpositive_integer(zz)
    zz = np.where(poles, 0.5, zz)
    left = zz.real < 0.5
    with np.errstate(all="ignore"):
        w = np.where(left, 1.0 - zz, zz)
        g = np.exp(_loggamma_right(w))
        # real input keeps an exactly real result
        g = np.where(w.imag == 0, g.real + 0j, g)
        out = np.where(left, np.pi / (sinpi(zz) * g), g)
    # small positive integers are exact factorials
    ints = (zz.imag == 0) & (zz.real >= 1) & (zz.real <= 171) & (zz.real == np.round(zz.real))
    if ints.any():
        out[ints] = [float(math.factorial(int(n) - 1)) for n in zz.real[ints]]
    out = np.where(poles, INF, out)
    return _finish(z, out, bad, scalar)


def polygamma(k: int, z):
    """k-th derivative of the digamma function psi = Gamma'/Gamma."""
    k = int(k)
    scalar = _scalar_in(z)
    z, bad = _prepare(z)
    zz = np.where(bad, 1.0, z)
    poles = _nonpositive_integer(zz)
    zz = np.where(poles, 1.0, zz)
    sign = -1.0 if k % 2 else 1.0  # (-1)^k
    kfact = math.factorial(k)
    acc = np.zeros_like(zz)
    with np.errstate(all="ignore"):
        # psi^(k)(z) = psi^(k)(z+1) - (-1)^k k! / z^(k+1)
        while True:
            need = zz.real < 10.0
            if not need.any():
                break
            acc = acc - np.where(need, sign * kfact / zz ** (k + 1), 0.0)
            zz = np.where(need, zz + 1.0, zz)
        inv = 1.0 / zz
        inv2 = inv * inv
        if k == 0:
            series = np.log(zz) - 0.5 * inv
            p = inv2
            for j, b in enumerate(BERNOULLI, start=1):
                series = series - float(b) / (2 * j) * p
                p = p * inv2
        else:
            series = (math.factorial(k - 1) * inv ** k + 0.5 * kfact * inv ** (k + 1))
            p = inv ** (k + 2)
            for j, b in enumerate(BERNOULLI, start=1):
                coef = float(b) * math.factorial(2 * j + k - 1) / math.factorial(2 * j)
                series = series + coef * p
                p = p * inv2
            series = -sign * series  # (-1)^(k+1)
        out = acc + series
    out = np.where(poles, INF, out)
    return _finish(z, out, bad, scalar)


# -- zeta -----------------------------------------------------------------------

def _em_terms(s):
    return np.maximum(20, np.ceil(0.6 * np.abs(s.imag) + 10.0)).astype(int)


def _zeta_em(s):
    """Euler-Maclaurin summation, meant for Re s >= 0.5 and s != 1."""
    n_terms = _em_terms(s)
    total = np.zeros_like(s)
    for n in range(1, int(n_terms.max()) if s.size else 1):
        total = total + np.where(n < n_terms, np.exp(-s * math.log(n)), 0.0)
    N = n_terms.astype(float)
    logN = np.log(N)
    N_s = np.exp(-s * logN)
    total = total + N * N_s / (s - 1.0) + 0.5 * N_s
    # Bernoulli corrections B_2k/(2k)! s(s+1)...(s+2k-2) N^(-s-2k+1)
    rising = s.copy()
    power = N_s / N
    inv_N2 = 1.0 / (N * N)
    for j, c in enumerate(_EM_COEF):
        if j:
            rising = rising * (s + (2 * j - 1)) * (s + 2 * j)
        total = total + c * rising * power
        power = power * inv_N2
    return total


def zeta(s):
    """Riemann zeta; reflection through the functional equation for Re s < 0.5."""
    scalar = _scalar_in(s)
    s, bad = _prepare(s)
    ss = np.where(bad, 2.0, s)
    pole = ss == 1.0
    origin = ss == 0.0
    ss = np.where(pole | origin, 2.0, ss)
    left = ss.real < 0.5
    out = np.empty_like(ss)
    with np.errstate(all="ignore"):
        right = ~left
        out[right] = _zeta_em(ss[right])
        sl = ss[left]
        if sl.size:
            w = 1.0 - sl
            zw = _zeta_em(w)
            direct = (np.abs(sl.imag) <= 100.0) & (sl.real >= -100.0)
            half = sl / 2.0
            d = (np.power(2.0, sl) * np.power(np.pi, sl - 1.0) * sinpi(half)
                 * np.exp(_loggamma_right(w)) * zw)
            d = np.where(sl.imag == 0, d.real + 0j, d)
            lg = (sl * math.log(2.0) + (sl - 1.0) * math.log(math.pi)
                  + _log_sinpi(half) + _loggamma_right(w) + np.log(zw))
            logspace = np.exp(lg)
            trivial = sinpi(half) == 0
            out[left] = np.where(trivial, 0.0, np.where(direct, d, logspace))
    out = np.where(origin, -0.5, out)
    out = np.where(pole, INF, out)
    return _finish(s, out, bad, scalar)


def zeta_derivative(s, k: int = 1):
    """k-th derivative of zeta by central differences (h = 1e-6 for k = 1)."""
    k = int(k)
    if k == 0:
        return zeta(s)
    scalar = _scalar_in(s)
    s, bad = _prepare(s)
    ss = np.where(bad, 2.0, s)
    h = 1e-6 if k == 1 else np.finfo(float).eps ** (1.0 / (k + 2))
    out = np.zeros_like(ss)
    for j in range(k + 1):
        w = math.comb(k, j) * (-1) ** j
        out = out + w * np.asarray(zeta(ss + (k / 2.0 - j) * h))
    out = out / h ** k
    out = np.where(ss == 1.0, INF, out)
    return _finish(s, out, bad, scalar)


# -- Weierstrass p ----------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSpec:
    """Period lattice {m*omega1 + n*omega2}; ``shells`` rows are summed each way."""

    omega1: complex
    omega2: complex
    shells: int = 40

    def __post_init__(self):
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))
        if self.omega1 == 0 or self.omega2 == 0:
            raise ValueError("periods must be nonzero")
        if (self.omega2 / self.omega1).imag == 0:
            raise ValueError("degenerate lattice: omega2/omega1 is real")
        if int(self.shells) != self.shells or self.shells < 10:
            raise ValueError("shells must be an integer >= 10")

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1


def _cot_csc2(x):
    """cot x and csc^2 x, stable for large |Im x|."""
    up = x.imag >= 0
    e = np.exp(np.where(up, 2j * x, -2j * x))  # |e| <= 1
    cot = np.where(up, 1j * (1 + e) / (e - 1), 1j * (1 + e) / (1 - e))
    csc2 = -4.0 * e / (1 - e) ** 2
    return cot, csc2


def _derivative_polys(order):
    """Q_k with d^k/dx^k csc^2 x = csc^2 x * Q_k(cot x)."""
    q = np.array([1.0])
    for _ in range(order):
        # Q' -> -(2c Q + (1 + c^2) Q')
        dq = P.polyder(q) if q.size > 1 else np.array([0.0])
        q = -P.polyadd(P.polymul([0.0, 2.0], q), P.polymul([1.0, 0.0, 1.0], dq))
    return q


def _lattice_distance(z, lat: LatticeSpec):
    # real coordinates (a, b) with z = a*omega1 + b*omega2
    w1, w2 = lat.omega1, lat.omega2
    det = (w1.conjugate() * w2).imag
    a = (z * w2.conjugate()).imag / -det
    b = (z * w1.conjugate()).imag / det
    best = np.full(z.shape, np.inf)
    for da in (0.0, 1.0):
        for db in (0.0, 1.0):
            p = (np.floor(a) + da) * w1 + (np.floor(b) + db) * w2
            best = np.minimum(best, np.abs(z - p))
    return best


def wp(z, lattice: LatticeSpec, order: int = 0):
    """Weierstrass p (or its ``order``-th derivative) for ``lattice``.

    Each row of the lattice parallel to omega1 is summed in closed form
    (sum_n 1/(w - n omega1)^2 = (pi/omega1)^2 csc^2(pi w/omega1)), and rows
    |m| <= shells are added; the row tails decay like exp(-2 pi |m| Im tau).
    """
    order = int(order)
    scalar = _scalar_in(z)
    z, bad = _prepare(z)
    zz = np.where(bad, 0.0, z)
    w1 = lattice.omega1
    tau = lattice.tau
    shells = int(lattice.shells)
    k = np.pi / w1
    q = _derivative_polys(order)
    with np.errstate(all="ignore"):
        u = zz / w1

        def row(m):
            cot, csc2 = _cot_csc2(np.pi * (u - m * tau))
            return csc2 if order == 0 else csc2 * P.polyval(cot, q)

        total = row(0)
        # pair rows m and -m so that evenness holds to rounding
        for m in range(1, shells + 1):
            total = total + (row(m) + row(-m))
        if order == 0:
            const = 1.0 / 3.0
            for m in range(1, shells + 1):
                _, c2 = _cot_csc2(np.array([np.pi * m * tau]))
                const += 2.0 * c2[0]
            total = total - const
        out = k ** (order + 2) * total
    out = np.where(_lattice_distance(zz, lattice) < 1e-9, INF, out)
    return _finish(z, out, bad, scalar)
